#include "hamcheck/report.hpp"

#include <cstdio>
#include <sstream>

namespace hamcheck {

using nlohmann::ordered_json;

namespace {

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

void text_value(std::ostringstream& os, const ordered_json& v, int indent) {
  const std::string pad(indent, ' ');
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) {
      if (x.is_structured()) {
        os << pad << k << ":\n";
        text_value(os, x, indent + 2);
      } else {
        os << pad << k << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
      }
    }
  } else if (v.is_array()) {
    std::size_t i = 0;
    for (const auto& x : v) {
      ++i;
      if (x.is_structured()) {
        os << pad << "#" << i << ":\n";
        text_value(os, x, indent + 2);
      } else {
        os << pad << "#" << i << ": " << (x.is_string() ? x.get<std::string>() : x.dump()) << "\n";
      }
    }
  }
}

}  // namespace

std::string report_json(const RunReport& report, bool timing) {
  ordered_json j = ordered_json::object();
  j["kernel_version"] = report.kernel_version;
  j["input_digest"] = "fnv1a64:" + report.input_digest;
  j["passivity_depth"] = report.passivity_depth;
  ordered_json tasks = ordered_json::array();
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t i = 0; i < report.tasks.size(); ++i) {
    const TaskResult& t = report.tasks[i];
    ++counts[static_cast<int>(t.status)];
    ordered_json e = ordered_json::object();
    e["index"] = i + 1;
    e["kind"] = dsl::to_string(t.kind);
    e["call"] = t.label;
    e["line"] = t.pos.line;
    e["status"] = to_string(t.status);
    e["summary"] = t.summary;
    if (!t.error_kind.empty()) e["error"] = t.error_kind;
    e["details"] = t.details;
    if (timing) e["seconds"] = t.seconds;
    tasks.push_back(std::move(e));
  }
  j["tasks"] = tasks;
  j["summary"] = {{"ok", counts[0]}, {"fail", counts[1]}, {"residual", counts[2]}};
  return j.dump(2) + "\n";
}

std::string report_text(const RunReport& report, bool timing) {
  std::ostringstream os;
  os << report.kernel_version << "  input " << report.input_digest << "\n";
  std::size_t ok = 0;
  for (const auto& t : report.tasks) {
    if (t.status == TaskStatus::ok) ++ok;
    os << "[" << to_string(t.status) << "] line " << t.pos.line << ": " << t.label;
    if (timing) os << "  (" << seconds(t.seconds) << " s)";
    os << "\n    " << t.summary;
    if (!t.error_kind.empty()) os << " [" << t.error_kind << "]";
    os << "\n";
    text_value(os, t.details, 4);
  }
  os << ok << "/" << report.tasks.size() << " tasks ok\n";
  return os.str();
}

}  // namespace hamcheck
