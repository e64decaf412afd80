#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sectional/runner.hpp"

namespace {

  void add_common(CLI::App* cmd, sectional::RunOptions& opt, std::string& format) {
    cmd->add_option("--ring", opt.ring_override, "Ring override: q, z or zmod:N");
    cmd->add_option("--seed", opt.seed, "Seed for randomized checks")->default_val(0);
    cmd->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->default_val("json");
    cmd->add_flag("--no-timestamp", [&](std::int64_t) { opt.timestamp = false; },
                  "Omit the timestamp and wall times");
    cmd->add_flag("--parallel", opt.parallel, "Use the OpenMP kernels");
  }

  int emit(sectional::RunResult const& r, std::string const& format) {
    if (format == "text") {
      std::cout << sectional::render_text(r.report);
    } else {
      std::cout << r.report.dump(2) << "\n";
    }
    return r.exit_code;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sectional algebras of semigroupoid bundles: validators, constructions and "
               "certified isomorphisms"};
  app.require_subcommand(1);

  sectional::RunOptions    opt;
  std::string              format = "json";
  std::vector<std::string> inputs;
  std::string              name, out_path, theorem = "all";

  auto* validate = app.add_subcommand("validate", "Validate every structure declared in FILE");
  validate->add_option("FILE", inputs, "Structure files")->required()->check(CLI::ExistingFile);
  add_common(validate, opt, format);

  auto* build = app.add_subcommand("build", "Run the build task NAME and write its output");
  build->add_option("NAME", name, "Build task or structure id")->required();
  build->add_option("--input", inputs, "Structure file")->required()->expected(1)
      ->check(CLI::ExistingFile);
  build->add_option("--out", out_path, "Output file")->required();
  add_common(build, opt, format);

  auto* verify = app.add_subcommand("verify", "Run the theorem pipelines of the given files");
  verify->add_option("THEOREM", theorem, "Theorem to run")
      ->required()
      ->check(CLI::IsMember({"tensor", "crossed", "smash", "quotient", "germ", "all"}));
  verify->add_option("--input", inputs, "Structure files")->required()->check(CLI::ExistingFile);
  add_common(verify, opt, format);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) {
      opt.command = "validate";
      return emit(sectional::validate_files(inputs, opt), format);
    }
    if (*build) {
      opt.command = "build";
      sectional::RunResult r = sectional::build_structure(inputs.front(), name, opt);
      if (r.exit_code == 0) {
        std::ofstream out(out_path);
        if (!out) {
          std::cerr << "cannot write " << out_path << "\n";
          return 2;
        }
        out << r.report["output"].dump(2) << "\n";
        r.report.erase("output");
        r.report["out"] = out_path;
      }
      return emit(r, format);
    }
    opt.command = "verify";
    opt.theorem = theorem;
    return emit(sectional::run_files(inputs, opt), format);
  } catch (sectional::InputError const& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
}
