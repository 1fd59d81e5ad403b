#include <charconv>
#include <cmath>
#include <string>

#include "gaugemode/config.hpp"

namespace gaugemode {

namespace {

double parse_real(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("cannot parse complex number '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

cd parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw ConfigError("empty complex number");

  const char last = s.back();
  if (last != 'i' && last != 'j' && last != 'I' && last != 'J') return {parse_real(s, text), 0.0};

  const std::string_view body(s.data(), s.size() - 1);
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string_view::npos;
  for (std::size_t p = body.size(); p-- > 1;) {
    if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  const std::string_view re = split == std::string_view::npos ? std::string_view() : body.substr(0, split);
  const std::string_view im = split == std::string_view::npos ? body : body.substr(split);

  double imag = 0;
  if (im.empty() || im == "+") {
    imag = 1;
  } else if (im == "-") {
    imag = -1;
  } else {
    imag = parse_real(im, text);
  }
  return {re.empty() ? 0.0 : parse_real(re, text), imag};
}

}  // namespace gaugemode
