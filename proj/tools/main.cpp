#include "scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace pfkit::cli;

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << content;
  if (!out) throw InputError("write failed: " + p.string());
}

std::string summary(Command c, const Json& r) {
  switch (c) {
    case Command::derive: return "P(h) = " + r["P"].get<std::string>();
    case Command::reduce: return std::to_string(r["melnikov"].size()) + " basis terms";
    case Command::expand: return std::to_string(r["ladder"]["entries"].size()) + " ladder entries";
    case Command::bound: return r.contains("bound") ? "bound " + std::to_string(r["bound"].get<int>()) : "no bound";
    case Command::verify: return r["pass"].get<bool>() ? "pass" : "FAIL";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-count certificates for Melnikov functions near a nilpotent homoclinic loop"};
  app.require_subcommand(1);

  std::string config;
  Overrides ov;
  std::string order, tolerance;
  int precision = 0, samples = 0;
  std::filesystem::path out_dir = ".";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", config, "Scenario JSON file")->required();
    sub->add_option("--order", order, "Truncation order of the expansions, e.g. 5 or 9/2");
    sub->add_option("--precision", precision, "Decimal digits for quadrature and constants")->check(CLI::Range(30, 100));
    sub->add_option("--samples", samples, "Energy samples for verify")->check(CLI::Range(1, 1000));
    sub->add_option("--tolerance", tolerance, "Residual tolerance for verify");
    sub->add_option("--output-dir", out_dir, "Directory for report files");
  };
  std::vector<std::pair<CLI::App*, std::optional<Command>>> subs;
  for (Command c : {Command::derive, Command::reduce, Command::expand, Command::bound, Command::verify}) {
    static const char* help[] = {"Picard-Fuchs system of the Hamiltonian", "Melnikov function in the reduced basis",
                                 "Series of the basis and of the Melnikov function", "Zero-bound certificate",
                                 "Oracle harness: PF residuals, reductions, series decay"};
    CLI::App* sub = app.add_subcommand(command_name(c), help[static_cast<int>(c)]);
    add_common(sub);
    subs.emplace_back(sub, c);
  }
  CLI::App* run_sub = app.add_subcommand("run", "Run the target named in the scenario");
  add_common(run_sub);
  subs.emplace_back(run_sub, std::nullopt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (!order.empty()) ov.order = order;
    if (!tolerance.empty()) ov.tolerance = tolerance;
    if (precision) ov.precision = precision;
    if (samples) ov.samples = samples;
    Scenario s = load_scenario(config);
    apply(s, ov);
    Command cmd = s.target;
    for (const auto& [sub, c] : subs)
      if (sub->parsed() && c) cmd = *c;

    RunResult r = run(cmd, s);
    std::filesystem::create_directories(out_dir);
    auto report = out_dir / (s.name + "." + command_name(cmd) + ".json");
    write_file(report, r.report.dump(2) + "\n");
    for (const auto& [name, content] : r.files) write_file(out_dir / name, content);
    std::cout << s.name << " " << command_name(cmd) << ": " << summary(cmd, r.report) << " -> " << report.string()
              << "\n";
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "pfkit: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
