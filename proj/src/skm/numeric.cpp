#include "numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace skm {

namespace {

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> ps;
    std::array<bool, 1010> sieve{};
    for (unsigned long i = 2; i < sieve.size(); ++i) {
      if (sieve[i]) continue;
      ps.push_back(i);
      for (unsigned long j = i * i; j < sieve.size(); j += i) sieve[j] = true;
    }
    return ps;
  }();
  return primes;
}

}  // namespace

Rat rat_from_string(const std::string& tok) {
  if (tok.empty()) fail(Errc::parse, "empty rational token");
  std::string s = tok;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      fail(Errc::parse, "malformed decimal '" + tok + "'");
    for (size_t i = 0; i < digits.size(); ++i) {
      char c = digits[i];
      if ((c == '-' || c == '+') && i == 0) continue;
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail(Errc::parse, "malformed decimal '" + tok + "'");
    }
    Int num(digits, 10);
    Int den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat q(num, den);
    q.canonicalize();
    return q;
  }
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      Int n(s, 10);
      return Rat(n);
    }
    std::string ns = s.substr(0, slash);
    std::string ds = s.substr(slash + 1);
    if (ns.empty() || ds.empty()) fail(Errc::parse, "malformed rational '" + tok + "'");
    Int n(ns, 10), d(ds, 10);
    if (d == 0) fail(Errc::parse, "zero denominator in '" + tok + "'");
    Rat q(n, d);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    fail(Errc::parse, "malformed rational '" + tok + "'");
  }
}

std::string rat_to_string(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

double rat_to_double(const Rat& q) { return q.get_d(); }

bool is_perfect_square(const Rat& q, Rat* root) {
  if (q < 0) return false;
  Rat c = q;
  c.canonicalize();
  if (mpz_perfect_square_p(c.get_num().get_mpz_t()) &&
      mpz_perfect_square_p(c.get_den().get_mpz_t())) {
    if (root) {
      Int rn, rd;
      mpz_sqrt(rn.get_mpz_t(), c.get_num().get_mpz_t());
      mpz_sqrt(rd.get_mpz_t(), c.get_den().get_mpz_t());
      *root = Rat(rn, rd);
      root->canonicalize();
    }
    return true;
  }
  return false;
}

Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Int ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Int ceil_mul_sqrt(const Int& m, const Rat& q) {
  if (q < 0) fail(Errc::invalid_argument, "negative radicand");
  if (m <= 0 || q == 0) return 0;
  // smallest c with c^2 * den >= m^2 * num
  Int x = m * m * q.get_num();
  const Int& d = q.get_den();
  Int c;
  mpz_fdiv_q(c.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  mpz_sqrt(c.get_mpz_t(), c.get_mpz_t());
  while (c * c * d < x) ++c;
  while (c > 0 && (c - 1) * (c - 1) * d >= x) --c;
  return c;
}

Scalar Scalar::rational(const Rat& r) {
  if (r < 0) fail(Errc::invalid_argument, "Scalar must be nonnegative");
  Scalar s;
  s.v = r;
  s.v.canonicalize();
  s.sqrt_form = false;
  return s;
}

Scalar Scalar::sqrt_of(const Rat& radicand) {
  if (radicand < 0) fail(Errc::invalid_argument, "negative radicand");
  Rat root;
  if (is_perfect_square(radicand, &root)) return rational(root);
  Scalar s;
  s.v = radicand;
  s.v.canonicalize();
  s.sqrt_form = true;
  return s;
}

int Scalar::compare(const Scalar& o) const {
  if (sqrt_form == o.sqrt_form) return cmp(v, o.v);
  // mixed: both values nonnegative, compare squares
  Rat a = square(), b = o.square();
  return cmp(a, b);
}

Scalar Scalar::scaled(const Rat& s) const {
  if (s < 0) fail(Errc::invalid_argument, "negative scale");
  if (!sqrt_form) return rational(Rat(v * s));
  return sqrt_of(Rat(v * s * s));
}

Scalar Scalar::times(const Scalar& s) const {
  if (!s.sqrt_form) return scaled(s.v);
  if (!sqrt_form) return s.scaled(v);
  return sqrt_of(Rat(v * s.v));
}

double Scalar::approx() const {
  double x = v.get_d();
  return sqrt_form ? std::sqrt(x) : x;
}

std::string Scalar::str() const {
  if (!sqrt_form) return rat_to_string(v);
  return "sqrt(" + rat_to_string(v) + ")";
}

std::pair<Int, Rat> canonical_radical(const Rat& radicand, const Rat& coeff) {
  Rat q = radicand;
  q.canonicalize();
  if (q < 0) fail(Errc::invalid_argument, "negative radicand");
  if (q == 0 || coeff == 0) return {Int(0), Rat(0)};
  // sqrt(num/den) = sqrt(num*den)/den
  Int n = q.get_num() * q.get_den();
  Rat c = coeff / q.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    c *= r;
    c.canonicalize();
    return {Int(1), c};
  }
  Int s = 1;
  for (unsigned long p : small_primes()) {
    Int p2 = Int(p) * Int(p);
    if (p2 > n) break;
    while (mpz_divisible_p(n.get_mpz_t(), p2.get_mpz_t())) {
      n /= p2;
      s *= p;
    }
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    s *= r;
    n = 1;
  }
  c *= s;
  c.canonicalize();
  return {n, c};
}

void sqrt_bounds(const Int& r, unsigned prec_bits, Rat& lo, Rat& hi) {
  if (r == 0) {
    lo = 0;
    hi = 0;
    return;
  }
  Int shifted = r << (2 * prec_bits);
  Int root;
  mpz_sqrt(root.get_mpz_t(), shifted.get_mpz_t());
  Int den = Int(1) << prec_bits;
  lo = Rat(root, den);
  lo.canonicalize();
  hi = Rat(root + 1, den);
  hi.canonicalize();
}

RadicalSum::RadicalSum(const Rat& r) {
  if (r != 0) {
    Rat c = r;
    c.canonicalize();
    terms_.emplace_back(Int(1), c);
  }
}

RadicalSum RadicalSum::of(const Scalar& s, const Rat& mult) {
  RadicalSum out;
  out.add_scaled(s, mult);
  return out;
}

bool RadicalSum::is_rational(Rat* out) const {
  if (terms_.empty()) {
    if (out) *out = 0;
    return true;
  }
  if (terms_.size() == 1 && terms_[0].first == 1) {
    if (out) *out = terms_[0].second;
    return true;
  }
  return false;
}

void RadicalSum::add_term(const Rat& coeff, const Rat& radicand) {
  auto [r, c] = canonical_radical(radicand, coeff);
  if (c == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), r,
                             [](const auto& t, const Int& key) { return t.first < key; });
  if (it != terms_.end() && it->first == r) {
    it->second += c;
    it->second.canonicalize();
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {r, c});
  }
}

void RadicalSum::add_scaled(const Scalar& s, const Rat& mult) {
  if (s.sqrt_form)
    add_term(mult, s.v);
  else if (s.v != 0)
    add_term(Rat(mult * s.v), Rat(1));
}

void RadicalSum::Builder::add(const Rat& coeff, const Scalar& s, const Rat& mult) {
  if (s.sqrt_form) {
    auto [r, c] = canonical_radical(s.v, Rat(coeff * mult));
    if (c != 0) raw.emplace_back(r, c);
  } else if (s.v != 0) {
    Rat c = coeff * mult * s.v;
    c.canonicalize();
    if (c != 0) raw.emplace_back(Int(1), c);
  }
}

RadicalSum RadicalSum::Builder::take() {
  RadicalSum out;
  out.normalize_merge(std::move(raw));
  raw.clear();
  return out;
}

void RadicalSum::normalize_merge(std::vector<std::pair<Int, Rat>>&& raw) {
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  terms_.clear();
  for (auto& t : raw) {
    if (!terms_.empty() && terms_.back().first == t.first) {
      terms_.back().second += t.second;
    } else {
      terms_.push_back(std::move(t));
    }
  }
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [](const auto& t) { return t.second == 0; }),
               terms_.end());
  for (auto& t : terms_) t.second.canonicalize();
}

RadicalSum& RadicalSum::operator+=(const RadicalSum& o) {
  std::vector<std::pair<Int, Rat>> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      merged.push_back(terms_[i++]);
    } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
      merged.push_back(o.terms_[j++]);
    } else {
      Rat c = terms_[i].second + o.terms_[j].second;
      c.canonicalize();
      if (c != 0) merged.emplace_back(terms_[i].first, c);
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

RadicalSum& RadicalSum::operator-=(const RadicalSum& o) { return *this += o.scaled(Rat(-1)); }

RadicalSum RadicalSum::operator+(const RadicalSum& o) const {
  RadicalSum r = *this;
  r += o;
  return r;
}

RadicalSum RadicalSum::operator-(const RadicalSum& o) const {
  RadicalSum r = *this;
  r -= o;
  return r;
}

RadicalSum RadicalSum::operator*(const RadicalSum& o) const {
  std::vector<std::pair<Int, Rat>> raw;
  raw.reserve(terms_.size() * o.terms_.size());
  for (const auto& [ra, ca] : terms_) {
    for (const auto& [rb, cb] : o.terms_) {
      auto [r, c] = canonical_radical(Rat(Int(ra * rb)), Rat(ca * cb));
      if (c != 0) raw.emplace_back(r, c);
    }
  }
  RadicalSum out;
  out.normalize_merge(std::move(raw));
  return out;
}

RadicalSum RadicalSum::scaled(const Rat& s) const {
  RadicalSum out;
  if (s == 0) return out;
  out.terms_ = terms_;
  for (auto& t : out.terms_) {
    t.second *= s;
    t.second.canonicalize();
  }
  return out;
}

std::pair<Rat, Rat> RadicalSum::bounds(unsigned prec_bits) const {
  Rat lo = 0, hi = 0;
  for (const auto& [r, c] : terms_) {
    if (r == 1) {
      lo += c;
      hi += c;
      continue;
    }
    Rat slo, shi;
    sqrt_bounds(r, prec_bits, slo, shi);
    if (c > 0) {
      lo += c * slo;
      hi += c * shi;
    } else {
      lo += c * shi;
      hi += c * slo;
    }
  }
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

int RadicalSum::sign() const {
  if (terms_.empty()) return 0;
  bool all_pos = true, all_neg = true;
  for (const auto& t : terms_) {
    if (t.second > 0) all_neg = false;
    if (t.second < 0) all_pos = false;
  }
  if (all_pos) return 1;
  if (all_neg) return -1;
  for (unsigned prec : {32u, 128u, 512u, 2048u, 8192u, 32768u}) {
    auto [lo, hi] = bounds(prec);
    if (lo > 0) return 1;
    if (hi < 0) return -1;
  }
  fail(Errc::numeric, "sign of radical sum undecided at maximum precision: " + str());
}

int RadicalSum::compare(const RadicalSum& o) const {
  if (terms_ == o.terms_) return 0;
  return (*this - o).sign();
}

double RadicalSum::approx() const {
  double x = 0;
  for (const auto& [r, c] : terms_) x += c.get_d() * std::sqrt(r.get_d());
  return x;
}

std::string RadicalSum::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [r, c] : terms_) {
    Rat a = c;
    bool neg = a < 0;
    if (neg) a = -a;
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? "-" : "+";
    }
    if (r == 1) {
      out += rat_to_string(a);
    } else {
      out += rat_to_string(a) + "*sqrt(" + r.get_str() + ")";
    }
  }
  return out;
}

}  // namespace skm
