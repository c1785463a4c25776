#include "copath/error.hpp"

namespace copath {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::Domain: return "Domain";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::DegenerateColumn: return "DegenerateColumn";
    case Errc::TooFewObservations: return "TooFewObservations";
    case Errc::SingularDesign: return "SingularDesign";
    case Errc::DegenerateConditional: return "DegenerateConditional";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DegenerateResiduals: return "DegenerateResiduals";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::NonNumericCell: return "NonNumericCell";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::IoError: return "IoError";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace copath
