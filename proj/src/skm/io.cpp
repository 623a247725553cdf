#include "io.hpp"

#include <fstream>
#include <sstream>

namespace skm {

Scalar scalar_from_string(const std::string& tok) {
  if (tok.rfind("sqrt(", 0) == 0 && tok.back() == ')')
    return Scalar::sqrt_of(rat_from_string(tok.substr(5, tok.size() - 6)));
  return Scalar::rational(rat_from_string(tok));
}

namespace {

struct LineReader {
  std::vector<std::string> lines;
  size_t pos = 0;
  long line_no = 0;

  explicit LineReader(const std::string& text) {
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l)) lines.push_back(l);
  }

  // next non-empty, non-comment line split into tokens
  bool next(std::vector<std::string>& toks) {
    while (pos < lines.size()) {
      const std::string& raw = lines[pos++];
      line_no = static_cast<long>(pos);
      std::string l = raw.substr(0, raw.find('#'));
      std::istringstream is(l);
      toks.clear();
      std::string t;
      while (is >> t) toks.push_back(t);
      if (!toks.empty()) return true;
    }
    return false;
  }
};

long to_long(const std::string& s, long line) {
  try {
    size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(Errc::parse, "expected integer, got '" + s + "'", line);
  }
}

unsigned long long to_ull(const std::string& s, long line) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(Errc::parse, "expected nonnegative integer, got '" + s + "'", line);
  }
}

Rat parse_rat_at(const std::string& s, long line) {
  try {
    return rat_from_string(s);
  } catch (const Error& e) {
    fail(Errc::parse, e.what(), line);
  }
}

Scalar parse_scalar_at(const std::string& s, long line) {
  try {
    return scalar_from_string(s);
  } catch (const Error& e) {
    fail(Errc::parse, e.what(), line);
  }
}

// coordinate list with at most one sqrt() token, which becomes the lift axis
void parse_coords(Point& p, const std::vector<std::string>& toks, size_t from, size_t to,
                  long line) {
  for (size_t i = from; i < to; ++i) {
    const std::string& t = toks[i];
    if (t.rfind("sqrt(", 0) == 0) {
      if (p.lift_axis >= 0) fail(Errc::parse, "more than one sqrt coordinate", line);
      Scalar s = parse_scalar_at(t, line);
      if (s.is_rational()) {
        p.coords.push_back(s.v);
      } else {
        p.lift_axis = static_cast<int>(p.coords.size());
        p.lift_sq = s.v;
        p.coords.push_back(0);
      }
    } else {
      p.coords.push_back(parse_rat_at(t, line));
    }
  }
}

std::string coord_token(const Point& p, size_t axis) {
  if (static_cast<int>(axis) == p.lift_axis)
    return "sqrt(" + rat_to_string(p.lift_sq) + ")";
  return rat_to_string(p.coords[axis]);
}

}  // namespace

Instance parse_instance(const std::string& text) {
  LineReader rd(text);
  std::vector<std::string> t;
  if (!rd.next(t) || t.size() != 2 || t[0] != "skm-instance" || t[1] != "1")
    fail(Errc::parse, "missing 'skm-instance 1' header", rd.line_no);
  Instance inst;
  size_t dim = 0;
  bool saw_end = false;

  auto expect_kv = [&](const char* key) -> std::string {
    if (!rd.next(t) || t.size() != 2 || t[0] != key)
      fail(Errc::parse, std::string("expected '") + key + " <value>'", rd.line_no);
    return t[1];
  };
  inst.objective = objective_from_name(expect_kv("objective"));
  inst.k = static_cast<int>(to_long(expect_kv("k"), rd.line_no));
  inst.metric.kind = metric_kind_from_name(expect_kv("metric"));
  dim = static_cast<size_t>(to_long(expect_kv("dim"), rd.line_no));

  if (!rd.next(t) || t.size() != 2 || t[0] != "points")
    fail(Errc::parse, "expected 'points <count>'", rd.line_no);
  size_t n_points = to_ull(t[1], rd.line_no);
  for (size_t i = 0; i < n_points; ++i) {
    if (!rd.next(t)) fail(Errc::parse, "unexpected end of points block", rd.line_no);
    size_t ncoord_end = t.size();
    bool has_pen = false;
    std::string pen_tok;
    if (t.size() >= 2 && t[t.size() - 2] == "pen") {
      has_pen = true;
      pen_tok = t.back();
      ncoord_end = t.size() - 2;
    }
    if (ncoord_end != 2 + dim)
      fail(Errc::parse,
           "point line needs id, multiplicity and " + std::to_string(dim) + " coordinates",
           rd.line_no);
    Point p;
    p.id = static_cast<int>(to_long(t[0], rd.line_no));
    p.multiplicity = to_ull(t[1], rd.line_no);
    parse_coords(p, t, 2, ncoord_end, rd.line_no);
    if (has_pen) {
      Scalar pen;
      try {
        pen = scalar_from_string(pen_tok);
      } catch (const Error&) {
        fail(Errc::parse, "penalty must be a strictly positive value, got '" + pen_tok + "'",
             rd.line_no);
      }
      if (!(pen > Scalar::rational(Rat(0))))
        fail(Errc::parse, "penalty must be a strictly positive value, got '" + pen_tok + "'",
             rd.line_no);
      inst.penalties[p.id] = pen;
    }
    inst.points.push_back(std::move(p));
  }
  inst.has_penalties = !inst.penalties.empty();
  if (inst.has_penalties && inst.penalties.size() != inst.points.size())
    fail(Errc::parse, "penalties must cover every point or none", rd.line_no);

  if (!rd.next(t) || t.size() != 2 || t[0] != "centres")
    fail(Errc::parse, "expected 'centres <count>'", rd.line_no);
  size_t n_centres = to_ull(t[1], rd.line_no);
  for (size_t i = 0; i < n_centres; ++i) {
    if (!rd.next(t)) fail(Errc::parse, "unexpected end of centres block", rd.line_no);
    if (t.size() != 1 + dim)
      fail(Errc::parse, "centre line needs id and " + std::to_string(dim) + " coordinates",
           rd.line_no);
    Point c;
    c.id = static_cast<int>(to_long(t[0], rd.line_no));
    parse_coords(c, t, 1, t.size(), rd.line_no);
    inst.centres.push_back(std::move(c));
  }

  while (rd.next(t)) {
    if (t[0] == "end") {
      saw_end = true;
      break;
    }
    if (t[0] == "order") {
      for (size_t i = 1; i < t.size(); ++i)
        inst.centre_order.push_back(static_cast<int>(to_long(t[i], rd.line_no)));
    } else if (t[0] == "matrix") {
      size_t count = to_ull(t.size() == 2 ? t[1] : "x", rd.line_no);
      for (size_t e = 0; e < count; ++e) {
        if (!rd.next(t) || t.size() != 3)
          fail(Errc::parse, "matrix entry needs 'i j value'", rd.line_no);
        int a = static_cast<int>(to_long(t[0], rd.line_no));
        int b = static_cast<int>(to_long(t[1], rd.line_no));
        if (a == b) fail(Errc::parse, "diagonal matrix entries are implicit", rd.line_no);
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        if (inst.metric.entries.count(key))
          fail(Errc::parse, "duplicate matrix entry", rd.line_no);
        inst.metric.entries[key] = parse_scalar_at(t[2], rd.line_no);
      }
    } else if (t[0] == "no_triangle") {
      inst.metric.skip_triangle = true;
    } else if (t[0] == "provenance") {
      size_t count = to_ull(t.size() == 2 ? t[1] : "x", rd.line_no);
      for (size_t e = 0; e < count; ++e) {
        if (!rd.next(t) || t.size() < 2)
          fail(Errc::parse, "provenance line needs 'key value...'", rd.line_no);
        std::string val = t[1];
        for (size_t i = 2; i < t.size(); ++i) val += " " + t[i];
        inst.provenance.emplace_back(t[0], val);
      }
    } else {
      fail(Errc::parse, "unexpected token '" + t[0] + "'", rd.line_no);
    }
  }
  if (!saw_end) fail(Errc::parse, "missing 'end'", rd.line_no);
  if (inst.metric.kind != MetricKind::explicit_matrix && !inst.metric.entries.empty())
    fail(Errc::parse, "matrix block on a geometric metric");
  try {
    inst.finalize();
  } catch (const Error& e) {
    fail(Errc::parse, std::string("invalid instance: ") + e.what());
  }
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream os;
  os << "skm-instance 1\n";
  os << "objective " << objective_name(inst.objective) << "\n";
  os << "k " << inst.k << "\n";
  os << "metric " << metric_kind_name(inst.metric.kind) << "\n";
  size_t dim = inst.points.empty() ? (inst.centres.empty() ? 0 : inst.centres[0].dim())
                                   : inst.points[0].dim();
  os << "dim " << dim << "\n";

  std::vector<const Point*> pts;
  for (const Point& p : inst.points) pts.push_back(&p);
  std::sort(pts.begin(), pts.end(), [](const Point* a, const Point* b) { return a->id < b->id; });
  os << "points " << pts.size() << "\n";
  for (const Point* p : pts) {
    os << p->id << " " << p->multiplicity;
    for (size_t a = 0; a < p->dim(); ++a) os << " " << coord_token(*p, a);
    if (inst.has_penalties) os << " pen " << inst.penalties.at(p->id).str();
    os << "\n";
  }
  std::vector<const Point*> cs;
  for (const Point& c : inst.centres) cs.push_back(&c);
  std::sort(cs.begin(), cs.end(), [](const Point* a, const Point* b) { return a->id < b->id; });
  os << "centres " << cs.size() << "\n";
  for (const Point* c : cs) {
    os << c->id;
    for (size_t a = 0; a < c->dim(); ++a) os << " " << coord_token(*c, a);
    os << "\n";
  }
  os << "order";
  for (int id : inst.centre_order) os << " " << id;
  os << "\n";
  if (inst.metric.kind == MetricKind::explicit_matrix) {
    os << "matrix " << inst.metric.entries.size() << "\n";
    for (const auto& [key, val] : inst.metric.entries)
      os << key.first << " " << key.second << " " << val.str() << "\n";
    if (inst.metric.skip_triangle) os << "no_triangle\n";
  }
  if (!inst.provenance.empty()) {
    os << "provenance " << inst.provenance.size() << "\n";
    for (const auto& [k, v] : inst.provenance) os << k << " " << v << "\n";
  }
  os << "end\n";
  return os.str();
}

PvcGraph parse_graph(const std::string& text) {
  LineReader rd(text);
  std::vector<std::string> t;
  if (!rd.next(t) || t.size() != 4)
    fail(Errc::parse, "graph header must be 'n m k s'", rd.line_no);
  PvcGraph g;
  g.n_vertices = static_cast<int>(to_long(t[0], rd.line_no));
  long m = to_long(t[1], rd.line_no);
  g.k = static_cast<int>(to_long(t[2], rd.line_no));
  g.s = static_cast<int>(to_long(t[3], rd.line_no));
  for (long e = 0; e < m; ++e) {
    if (!rd.next(t) || t.size() != 2)
      fail(Errc::parse, "edge line must be 'u v'", rd.line_no);
    int u = static_cast<int>(to_long(t[0], rd.line_no));
    int v = static_cast<int>(to_long(t[1], rd.line_no));
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.validate();
  return g;
}

GridTilingInstance parse_grid_tiling(const std::string& text) {
  LineReader rd(text);
  std::vector<std::string> t;
  if (!rd.next(t) || t.size() != 2 || t[0] != "gridtiling" || t[1] != "1")
    fail(Errc::parse, "missing 'gridtiling 1' header", rd.line_no);
  GridTilingInstance gt;
  if (!rd.next(t) || t.size() != 2 || t[0] != "n")
    fail(Errc::parse, "expected 'n <int>'", rd.line_no);
  gt.n = static_cast<int>(to_long(t[1], rd.line_no));
  if (!rd.next(t) || t.size() != 2 || t[0] != "k")
    fail(Errc::parse, "expected 'k <int>'", rd.line_no);
  gt.k = static_cast<int>(to_long(t[1], rd.line_no));
  while (rd.next(t)) {
    if (t[0] == "end") {
      gt.validate();
      return gt;
    }
    if (t[0] != "set" || t.size() < 5 || t[3] != ":")
      fail(Errc::parse, "expected 'set i j : a,b ...' or 'end'", rd.line_no);
    int i = static_cast<int>(to_long(t[1], rd.line_no));
    int j = static_cast<int>(to_long(t[2], rd.line_no));
    std::vector<std::pair<int, int>> pairs;
    for (size_t p = 4; p < t.size(); ++p) {
      auto comma = t[p].find(',');
      if (comma == std::string::npos) fail(Errc::parse, "pair must be 'a,b'", rd.line_no);
      pairs.emplace_back(
          static_cast<int>(to_long(t[p].substr(0, comma), rd.line_no)),
          static_cast<int>(to_long(t[p].substr(comma + 1), rd.line_no)));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    if (!gt.sets.emplace(std::make_pair(i, j), pairs).second)
      fail(Errc::parse, "duplicate set", rd.line_no);
  }
  fail(Errc::parse, "missing 'end'", rd.line_no);
}

std::string serialize_grid_tiling(const GridTilingInstance& gt) {
  std::ostringstream os;
  os << "gridtiling 1\n"
     << "n " << gt.n << "\n"
     << "k " << gt.k << "\n";
  for (const auto& [cell, pairs] : gt.sets) {
    os << "set " << cell.first << " " << cell.second << " :";
    for (auto [a, b] : pairs) os << " " << a << "," << b;
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

std::string serialize_trace(const SearchTrace& trace) {
  std::ostringstream os;
  os << "skm-trace 1\n";
  os << "bound_floor " << trace.bound_floor << "\n";
  for (const TraceStep& s : trace.steps) {
    os << "step " << s.iter;
    if (!s.swapped_in.empty()) {
      os << " in";
      for (int id : s.swapped_in) os << " " << id;
      os << " out";
      for (int id : s.swapped_out) os << " " << id;
    }
    os << " cost " << s.cost.str() << " solution";
    for (int id : s.solution) os << " " << id;
    os << "\n";
  }
  os << "reason "
     << (trace.terminated_reason == StopReason::local_opt ? "local_opt" : "max_iters") << "\n";
  os << "end\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::invalid_argument, "cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::invalid_argument, "cannot write file '" + path + "'");
  out << content;
}

}  // namespace skm
