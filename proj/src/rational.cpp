#include "symbill/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace symbill {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NotConvex: return "NotConvex";
    case Errc::CollinearVertices: return "CollinearVertices";
    case Errc::DuplicateVertex: return "DuplicateVertex";
    case Errc::TooFewVertices: return "TooFewVertices";
    case Errc::InvalidPhasePoint: return "InvalidPhasePoint";
    case Errc::ParamOutOfRange: return "ParamOutOfRange";
    case Errc::ClosureViolated: return "ClosureViolated";
    case Errc::NotConvexAfterPerturbation: return "NotConvexAfterPerturbation";
    case Errc::DegenerateRect: return "DegenerateRect";
    case Errc::NotPeriodic: return "NotPeriodic";
    case Errc::NotClosed: return "NotClosed";
    case Errc::HaltEncountered: return "HaltEncountered";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Rat make_rat(long num, long den) {
  if (den == 0) throw Error(Errc::ParseError, "zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(Errc::ParseError, "bad integer '" + std::string(s) + "'");
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

Rat parse_decimal(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_neg = false;
    if (!exp_part.empty() && (exp_part[0] == '-' || exp_part[0] == '+')) {
      exp_neg = exp_part[0] == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6)
      throw Error(Errc::ParseError, "bad exponent in '" + std::string(s) + "'");
    exponent = std::stol(std::string(exp_part));
    if (exp_neg) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty()))
      throw Error(Errc::ParseError, "bad decimal '" + std::string(s) + "'");
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(s)) throw Error(Errc::ParseError, "bad number '" + std::string(s) + "'");
    digits = std::string(s);
  }
  mpz_class mant(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rat r = exponent >= 0 ? Rat(mant * scale) : Rat(mant, scale);
  r.canonicalize();
  return neg ? Rat(-r) : r;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(Errc::ParseError, "empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
  }
  return parse_decimal(text);
}

Rat rat_from_double(double value) {
  if (!std::isfinite(value)) throw Error(Errc::ParseError, "non-finite number");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return parse_decimal(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

std::string to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_str();
}

double to_double(const Rat& r) { return r.get_d(); }

std::size_t bit_size(const Rat& r) {
  std::size_t n = mpz_sizeinbase(r.get_num_mpz_t(), 2);
  std::size_t d = mpz_sizeinbase(r.get_den_mpz_t(), 2);
  return n > d ? n : d;
}

Rat floor_rat(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rat(q);
}

Rat abs_rat(const Rat& r) { return sgn(r) < 0 ? Rat(-r) : r; }

}  // namespace symbill
