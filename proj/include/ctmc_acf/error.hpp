#ifndef CTMC_ACF_ERROR_HPP
#define CTMC_ACF_ERROR_HPP

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ctmc {

/// Failure categories. The CLI maps model-level codes to exit status 1 and
/// numerical codes to exit status 2.
enum class Errc {
  // model / input
  NonSquare,
  DimensionMismatch,
  NonFinite,
  InvalidStateSpace,
  InvalidProbVector,
  NegativeOffDiagonal,
  PositiveDiagonal,
  RowSumNonZero,
  NotIrreducible,
  InvalidArgument,
  IndexOutOfRange,
  ParseError,
  // numerical
  SingularSystem,
  DegenerateSpectrum,
  ImaginaryResidueTooLarge,
  OverflowHorizon,
  MixtureUnavailable,
  AbsorbingState,
  InsufficientVisits,
};

inline constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidStateSpace: return "InvalidStateSpace";
    case Errc::InvalidProbVector: return "InvalidProbVector";
    case Errc::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case Errc::PositiveDiagonal: return "PositiveDiagonal";
    case Errc::RowSumNonZero: return "RowSumNonZero";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ParseError: return "ParseError";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::DegenerateSpectrum: return "DegenerateSpectrum";
    case Errc::ImaginaryResidueTooLarge: return "ImaginaryResidueTooLarge";
    case Errc::OverflowHorizon: return "OverflowHorizon";
    case Errc::MixtureUnavailable: return "MixtureUnavailable";
    case Errc::AbsorbingState: return "AbsorbingState";
    case Errc::InsufficientVisits: return "InsufficientVisits";
  }
  return "Unknown";
}

/// True for failures of the numerical machinery rather than of the input.
inline constexpr bool is_numerical(Errc code) noexcept {
  switch (code) {
    case Errc::SingularSystem:
    case Errc::DegenerateSpectrum:
    case Errc::ImaginaryResidueTooLarge:
    case Errc::OverflowHorizon:
    case Errc::MixtureUnavailable:
    case Errc::AbsorbingState:
    case Errc::InsufficientVisits:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

namespace detail {

/// Scientific notation with one mantissa decimal and an unpadded exponent,
/// e.g. -5.0e-1.
inline std::string short_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  std::string s(buf);
  auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string mant = s.substr(0, e);
  int exponent = std::stoi(s.substr(e + 1));
  return mant + "e" + std::to_string(exponent);
}

/// 17 significant digits, enough to round-trip any double.
inline std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail
}  // namespace ctmc

#endif  // CTMC_ACF_ERROR_HPP
