#include "pmtol/errors.hpp"

namespace pmtol {

const char* errc_name(errc c) {
  switch (c) {
    case errc::out_of_range: return "OutOfRange";
    case errc::unknown_polarization: return "UnknownPolarization";
    case errc::degenerate_no_poling: return "DegenerateNoPoling";
    case errc::infinite_tolerance: return "InfiniteTolerance";
    case errc::degenerate_everywhere_critical: return "DegenerateEverywhereCritical";
    case errc::mesh_too_coarse: return "MeshTooCoarse";
    case errc::width_window_exceeded: return "WidthWindowExceeded";
    case errc::upsample_only: return "UpsampleOnly";
    case errc::axis_mismatch: return "AxisMismatch";
    case errc::missing_period: return "MissingPeriod";
    case errc::empty_spectrum: return "EmptySpectrum";
    case errc::no_peak: return "NoPeak";
    case errc::bad_input: return "BadInput";
    case errc::bad_config: return "BadConfig";
    case errc::io_error: return "IoError";
  }
  return "Error";
}

}  // namespace pmtol
