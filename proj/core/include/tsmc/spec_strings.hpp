#ifndef TSMC_SPEC_STRINGS_HPP
#define TSMC_SPEC_STRINGS_HPP

// Parsing of the compact spec strings used on the command line and in
// experiment config files.
//
// Grammar (whitespace around the whole string is trimmed, none is allowed inside):
//
//   law    := "point:" UINT
//           | "lazy:" REAL                       0 <= eps <= 1
//           | "shiftpois:" UINT ":" REAL         shift, rate >= 0
//           | "pmf:" UINT "=" REAL ("," UINT "=" REAL)*
//   kernel := "cn:" REAL                         |theta| < 1
//           | "rwm:" RULE [":h=" REAL]          increment U[-h, h], h > 0, default 2
//           | "counter:1" | "counter:2"
//   RULE   := "mh" | "barker" | "lazy:" REAL          0 < eps < 1
//
//   UINT   := [0-9]+ fitting in 32 bits (no sign)
//   REAL   := anything std::from_chars(general) consumes completely, finite;
//             a leading '+' is not accepted.
//
// Errors are reported as ConfigError naming the offending field.

#include <cstdint>
#include <string>
#include <string_view>

#include "tsmc/kernels.hpp"
#include "tsmc/sampling_law.hpp"

namespace tsmc {

/// Shortest decimal text that round-trips to `value`; "inf"/"-inf"/"nan" otherwise.
std::string format_real(double value);

double parse_real(std::string_view text, std::string_view field);
std::uint64_t parse_uint(std::string_view text, std::string_view field,
                         std::uint64_t max = UINT64_MAX);

SamplingLaw parse_law(std::string_view spec);

/// Parsed kernel spec; `build()` constructs the kernel itself.
struct KernelSpec {
  enum class Family { contracting_normal, random_walk, counterexample };

  Family family;
  double theta = 0.0;                         // contracting_normal
  AcceptanceRule rule = AcceptanceRule::mh(); // random_walk
  double half_width = kDefaultIncrementHalfWidth;  // random_walk
  int power = 1;                              // counterexample
  std::string text;                           // canonical spec string

  MarkovKernel build() const;
  /// Short parameter summary for reports ("0.9", "mh", "eps=0.5", "mh;h=4", "1").
  std::string params() const;
};

KernelSpec parse_kernel(std::string_view spec);

}  // namespace tsmc

#endif  // TSMC_SPEC_STRINGS_HPP
