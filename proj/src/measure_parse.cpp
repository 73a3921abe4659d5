#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "moment_spectra/error.hpp"
#include "moment_spectra/format.hpp"
#include "moment_spectra/measure.hpp"

namespace moment_spectra {

namespace {

// spec := term ( '+' term )* ; term := ( number '*' )? atom
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MeasureSpec parse() {
    MeasureSpec spec;
    spec.terms.push_back(term());
    skip_space();
    while (peek() == '+') {
      ++pos_;
      spec.terms.push_back(term());
      skip_space();
    }
    if (pos_ != text_.size()) fail("unexpected character");
    return spec;
  }

 private:
  MeasureTerm term() {
    skip_space();
    MeasureTerm t;
    const std::size_t start = pos_;
    if (starts_number()) {
      t.weight = number();
      skip_space();
      expect('*');
      if (!(t.weight > 0.0)) {
        throw Error(ErrorKind::InvalidArgument,
                    "weight must be > 0 at position " + std::to_string(start));
      }
    }
    t.atom = atom();
    return t;
  }

  Atom atom() {
    skip_space();
    const std::size_t start = pos_;
    std::string name;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      name.push_back(text_[pos_++]);
    }
    if (name == "dirac") {
      const double t = argument();
      require(t >= 0.0 && t < 1.0, start, "dirac location must be in [0,1)");
      return Dirac{t};
    }
    if (name == "lebesgue") {
      skip_space();
      double r = 1.0;
      if (peek() == '(') r = argument();
      require(r > 0.0 && r <= 1.0, start, "lebesgue r must be in (0,1]");
      return Lebesgue{r};
    }
    if (name == "power") {
      const double alpha = argument();
      require(alpha > 0.0, start, "power alpha must be > 0");
      return PowerDensity{alpha};
    }
    if (name == "logpower") {
      const double s = argument();
      require(s > 1.0, start, "logpower s must be > 1");
      return LogPowerDensity{s};
    }
    pos_ = start;
    fail(name.empty() ? "expected atom" : "unknown atom '" + name + "'");
  }

  double argument() {
    skip_space();
    expect('(');
    skip_space();
    if (!starts_number()) fail("expected number");
    const double value = number();
    skip_space();
    expect(')');
    return value;
  }

  bool starts_number() const {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
           c == '-' || c == '+';
  }

  double number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    if (end < text_.size() && (text_[end] == '-' || text_[end] == '+')) ++end;
    std::size_t digits = 0;
    while (end < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[end]))) {
      ++end;
      ++digits;
    }
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      while (end < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[end]))) {
        ++end;
        ++digits;
      }
    }
    if (digits == 0) fail("malformed number");
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      if (exp_end < text_.size() &&
          (text_[exp_end] == '-' || text_[exp_end] == '+')) {
        ++exp_end;
      }
      std::size_t exp_digits = 0;
      while (exp_end < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
        ++exp_end;
        ++exp_digits;
      }
      if (exp_digits > 0) end = exp_end;
    }
    std::size_t first = start;
    if (text_[first] == '+') ++first;
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text_.data() + first, text_.data() + end, value);
    if (ec != std::errc() || ptr != text_.data() + end) {
      fail("malformed number");
    }
    pos_ = end;
    return value;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void require(bool ok, std::size_t at, const std::string& message) const {
    if (!ok) {
      throw Error(ErrorKind::InvalidArgument,
                  message + " at position " + std::to_string(at));
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(pos_, message);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MeasureSpec parse_measure(std::string_view text) {
  MeasureSpec spec = Parser(text).parse();
  validate(spec);
  return spec;
}

std::string to_string(const MeasureSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    const MeasureTerm& term = spec.terms[i];
    if (i > 0) out += "+";
    if (term.weight != 1.0) out += format_double(term.weight) + "*";
    std::visit(
        [&out](const auto& atom) {
          using T = std::decay_t<decltype(atom)>;
          if constexpr (std::is_same_v<T, Dirac>) {
            out += "dirac(" + format_double(atom.t) + ")";
          } else if constexpr (std::is_same_v<T, Lebesgue>) {
            out += "lebesgue(" + format_double(atom.r) + ")";
          } else if constexpr (std::is_same_v<T, PowerDensity>) {
            out += "power(" + format_double(atom.alpha) + ")";
          } else {
            out += "logpower(" + format_double(atom.s) + ")";
          }
        },
        term.atom);
  }
  return out;
}

}  // namespace moment_spectra
