#include "tsmc/spec_strings.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tsmc/errors.hpp"

namespace tsmc {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  return s.substr(begin, s.find_last_not_of(ws) - begin + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto pos = s.find(sep);
    parts.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return parts;
    s.remove_prefix(pos + 1);
  }
}

std::uint32_t parse_u32(std::string_view text, std::string_view field) {
  return static_cast<std::uint32_t>(parse_uint(text, field, UINT32_MAX));
}

// Rethrows a constructor's domain/argument error as a ConfigError on `field`.
template <class F>
auto guarded(std::string_view field, F&& build) {
  try {
    return build();
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string{field}, e.what());
  }
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

double parse_real(std::string_view text, std::string_view field) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value, std::chars_format::general);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError(std::string{field}, "expected a finite real number, got '" + std::string{text} + "'");
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text, std::string_view field, std::uint64_t max) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value, 10);
  if (text.empty() || ec != std::errc{} || ptr != end || value > max) {
    throw ConfigError(std::string{field},
                      "expected an unsigned integer <= " + std::to_string(max) + ", got '" + std::string{text} + "'");
  }
  return value;
}

SamplingLaw parse_law(std::string_view spec) {
  constexpr std::string_view field = "mu";
  spec = trim(spec);
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (colon == std::string_view::npos) {
    throw ConfigError(std::string{field}, "sampling law '" + std::string{spec} + "' has no ':'");
  }

  if (head == "point") return SamplingLaw::point_mass(parse_u32(rest, field));
  if (head == "lazy") {
    const double eps = parse_real(rest, field);
    return guarded(field, [eps] { return SamplingLaw::lazy(eps); });
  }
  if (head == "shiftpois") {
    const auto parts = split(rest, ':');
    if (parts.size() != 2) throw ConfigError(std::string{field}, "expected shiftpois:<shift>:<rate>");
    const std::uint32_t shift = parse_u32(parts[0], field);
    const double rate = parse_real(parts[1], field);
    return guarded(field, [shift, rate] { return SamplingLaw::shifted_poisson(shift, rate); });
  }
  if (head == "pmf") {
    std::vector<std::pair<std::uint32_t, double>> pmf;
    for (std::string_view entry : split(rest, ',')) {
      const auto eq = entry.find('=');
      if (eq == std::string_view::npos) throw ConfigError(std::string{field}, "pmf entry '" + std::string{entry} + "' is not k=p");
      pmf.emplace_back(parse_u32(entry.substr(0, eq), field), parse_real(entry.substr(eq + 1), field));
    }
    return guarded(field, [&pmf] { return SamplingLaw::finite_support(std::move(pmf)); });
  }
  throw ConfigError(std::string{field}, "unknown sampling law '" + std::string{head} + "'");
}

KernelSpec parse_kernel(std::string_view spec) {
  constexpr std::string_view field = "kernel";
  spec = trim(spec);
  const auto parts = split(spec, ':');
  KernelSpec out;

  if (parts[0] == "cn" && parts.size() == 2) {
    out.family = KernelSpec::Family::contracting_normal;
    out.theta = parse_real(parts[1], field);
    if (!(std::fabs(out.theta) < 1.0)) throw ConfigError(std::string{field}, "contracting normals need |theta| < 1");
    out.text = "cn:" + format_real(out.theta);
    return out;
  }
  if (parts[0] == "rwm" && parts.size() >= 2) {
    out.family = KernelSpec::Family::random_walk;
    auto rule_parts = parts;
    if (rule_parts.back().starts_with("h=")) {
      out.half_width = parse_real(rule_parts.back().substr(2), field);
      if (!(out.half_width > 0.0)) throw ConfigError(std::string{field}, "increment half width must be positive");
      rule_parts.pop_back();
    }
    if (rule_parts.size() == 2 && rule_parts[1] == "mh") {
      out.rule = AcceptanceRule::mh();
    } else if (rule_parts.size() == 2 && rule_parts[1] == "barker") {
      out.rule = AcceptanceRule::barker();
    } else if (rule_parts.size() == 3 && rule_parts[1] == "lazy") {
      const double eps = parse_real(rule_parts[2], field);
      out.rule = guarded(field, [eps] { return AcceptanceRule::lazy_metropolis(eps); });
    } else {
      throw ConfigError(std::string{field},
                        "expected rwm:mh, rwm:barker or rwm:lazy:<eps> with optional :h=<width>, got '" +
                            std::string{spec} + "'");
    }
    out.text = "rwm:" + out.rule.name();
    if (out.half_width != kDefaultIncrementHalfWidth) out.text += ":h=" + format_real(out.half_width);
    return out;
  }
  if (parts[0] == "counter" && parts.size() == 2) {
    out.family = KernelSpec::Family::counterexample;
    out.power = static_cast<int>(parse_uint(parts[1], field, 2));
    if (out.power != 1 && out.power != 2) throw ConfigError(std::string{field}, "counterexample power must be 1 or 2");
    out.text = "counter:" + std::to_string(out.power);
    return out;
  }
  throw ConfigError(std::string{field}, "unknown kernel spec '" + std::string{spec} + "'");
}

MarkovKernel KernelSpec::build() const {
  switch (family) {
    case Family::contracting_normal:
      return contracting_normal(theta);
    case Family::random_walk:
      return random_walk_metropolis(rule, half_width);
    case Family::counterexample:
      break;
  }
  return counterexample_kernel(power);
}

std::string KernelSpec::params() const {
  switch (family) {
    case Family::contracting_normal:
      return format_real(theta);
    case Family::random_walk: {
      std::string p =
          rule.kind() == AcceptanceRule::Kind::lazy_metropolis ? "eps=" + format_real(rule.eps()) : rule.name();
      if (half_width != kDefaultIncrementHalfWidth) p += ";h=" + format_real(half_width);
      return p;
    }
    case Family::counterexample:
      break;
  }
  return std::to_string(power);
}

}  // namespace tsmc
