#ifndef HAMCHECK_REPORT_HPP
#define HAMCHECK_REPORT_HPP

#include <string>

#include "hamcheck/runner.hpp"

namespace hamcheck {

// Byte-identical for identical input unless timings are requested.
std::string report_json(const RunReport& report, bool timing = false);
std::string report_text(const RunReport& report, bool timing = false);

}  // namespace hamcheck

#endif  // HAMCHECK_REPORT_HPP
