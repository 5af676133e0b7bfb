#pragma once

#include <stdexcept>
#include <string>

namespace pmtol {

enum class errc {
  out_of_range,
  unknown_polarization,
  degenerate_no_poling,
  infinite_tolerance,
  degenerate_everywhere_critical,
  mesh_too_coarse,
  width_window_exceeded,
  upsample_only,
  axis_mismatch,
  missing_period,
  empty_spectrum,
  no_peak,
  bad_input,
  bad_config,
  io_error,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace pmtol
