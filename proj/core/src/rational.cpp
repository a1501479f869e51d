#include "verifact/rational.hpp"

#include <fmt/format.h>

#include <cctype>

#include "verifact/errors.hpp"

namespace verifact {

namespace mp = boost::multiprecision;

Rational make_rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) {
    throw Error("rational with zero denominator");
  }
  return Rational(mp::cpp_int(numerator), mp::cpp_int(denominator));
}

std::string to_string(const Rational& value) {
  const mp::cpp_int num = mp::numerator(value);
  const mp::cpp_int den = mp::denominator(value);
  if (den == 1) {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto fail = [&]() -> Rational {
    throw FormatError(fmt::format("not a rational number: '{}'", text));
  };

  Rational result;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    const mp::cpp_int d{std::string(den)};
    if (d == 0) return fail();
    result = Rational(mp::cpp_int(std::string(num)), d);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) return fail();
    mp::cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const mp::cpp_int w = whole.empty() ? mp::cpp_int(0) : mp::cpp_int(std::string(whole));
    result = Rational(w * scale + mp::cpp_int(std::string(frac)), scale);
  } else {
    if (!all_digits(body)) return fail();
    result = Rational(mp::cpp_int(std::string(body)));
  }
  return negative ? Rational(-result) : result;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace verifact
