#ifndef SECTIONAL_RUNNER_HPP_
#define SECTIONAL_RUNNER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "workspace.hpp"

namespace sectional {

  struct RunOptions {
    std::string                command = "verify";
    std::string                theorem = "all";  // verify filter
    std::optional<std::string> ring_override;
    std::uint64_t              seed      = 0;
    bool                       timestamp = true;
    bool                       parallel  = false;
    std::size_t                samples   = 200;  // convolution triples per bundle validation
  };

  //! Exit codes: 0 all tasks passed, 1 some task failed, 2 invalid input.
  struct RunResult {
    nlohmann::json report;
    int            exit_code = 0;
  };

  //! One task of a parsed workspace. Status is pass, fail, invalid,
  //! capability or internal.
  nlohmann::json run_task(Workspace& ws, TaskSpec const& task, RunOptions const& opt);

  //! `verify`: runs the tasks of every file in order.
  RunResult run_files(std::vector<std::string> const& paths, RunOptions const& opt);

  //! `validate`: builds and validates every declared structure.
  RunResult validate_files(std::vector<std::string> const& paths, RunOptions const& opt);

  //! `build`: the structure produced by the build task (or declared
  //! structure) called `name`, in the structure-file format.
  RunResult build_structure(std::string const& path, std::string const& name,
                            RunOptions const& opt);

  //! Builds the output document of one build task.
  nlohmann::json build_output(Workspace& ws, TaskSpec const& task);

  //! Leaves of a report as (path, value) pairs in document order.
  std::vector<std::pair<std::string, std::string>> flatten(nlohmann::json const& j);

  //! One "path = value" line per leaf.
  std::string render_text(nlohmann::json const& report);
  std::vector<std::pair<std::string, std::string>> parse_text(std::string const& text);

}  // namespace sectional

#endif  // SECTIONAL_RUNNER_HPP_
