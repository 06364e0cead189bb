#ifndef HAMCHECK_RUNNER_HPP
#define HAMCHECK_RUNNER_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "hamcheck/dsl.hpp"

namespace hamcheck {

inline constexpr const char* kKernelVersion = "hamcheck-kernel 1.0.0";

enum class TaskStatus { ok, fail, residual };

const char* to_string(TaskStatus s);

struct TaskResult {
  dsl::TaskKind kind;
  std::string label;
  dsl::SourcePos pos;
  TaskStatus status = TaskStatus::ok;
  std::string summary;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::string error_kind;  // set when a kernel error ended the task
  double seconds = 0;
};

struct RunReport {
  std::string kernel_version = kKernelVersion;
  std::string input_digest;
  unsigned passivity_depth = 4;
  std::vector<TaskResult> tasks;

  bool all_ok() const;
};

// FNV-1a 64-bit over the input bytes, as 16 hex digits.
std::string input_digest(std::string_view bytes);

// Tasks may run concurrently; results keep declaration order.
RunReport run_program(const dsl::Program& program, std::string_view source);

TaskResult run_task(const dsl::Program& program, const dsl::TaskSpec& task);

}  // namespace hamcheck

#endif  // HAMCHECK_RUNNER_HPP
