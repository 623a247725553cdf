#pragma once

#include <stdexcept>
#include <string>

namespace skm {

enum class Errc {
  parse = 1,
  invalid_argument = 2,
  budget_exceeded = 3,
  missing_entry = 4,
  numeric = 5,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg, long line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        code_(code),
        line_(line) {}

  Errc code() const { return code_; }
  long line() const { return line_; }

private:
  Errc code_;
  long line_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg, long line = -1) {
  throw Error(c, msg, line);
}

}  // namespace skm
