#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for Yamabe constants, surgery necks and orbit reductions", "yamabe"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config;
  std::string out = cli::default_out_dir();
  app.add_option("--config", config, "TOML or JSON config file (flags win over file values)");
  app.add_option("--out", out, "output directory (default: $YAMABE_OUT or yamabe_out)")->capture_default_str();
  app.set_version_flag("--version", std::string(yamabe::io::kToolkitVersion));

  std::vector<cli::Command> commands;
  commands.push_back(cli::make_curvature(app));
  commands.push_back(cli::make_quotient(app));
  commands.push_back(cli::make_bend(app));
  commands.push_back(cli::make_homotopy(app));
  commands.push_back(cli::make_reduce(app));
  commands.push_back(cli::make_surgery_demo(app));
  for (cli::Command& c : cli::make_invariants(app)) commands.push_back(std::move(c));
  commands.push_back(cli::make_continuity(app));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  cli::Command* fired = nullptr;
  for (cli::Command& c : commands)
    if (c.app->parsed()) fired = &c;
  if (!fired) {
    std::cerr << "error: no command given\n";
    return cli::kUsage;
  }

  try {
    if (!config.empty()) fired->params->apply(cli::load_config(config), fired->sections);
    fired->params->validate_all();
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  }

  cli::Run run(fired->name, out);
  int code = cli::kOk;
  std::string failure;
  try {
    fired->run(run);
    if (!run.pass()) code = cli::kCertification;
  } catch (const cli::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const yamabe::InvalidSpecError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const yamabe::FeasibilityError& e) {
    failure = e.what();
    code = cli::kCertification;
  } catch (const yamabe::ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const yamabe::Error& e) {
    failure = e.what();
    code = cli::kCertification;
  }
  if (!failure.empty()) run.check(failure, false);
  run.finish(fired->params->echo());
  const std::string manifest = (run.out() / "manifest.json").string();
  if (code == cli::kOk) {
    std::cout << fired->name << ": ok, manifest " << manifest << "\n";
  } else {
    if (!failure.empty()) std::cerr << "error: " << failure << "\n";
    std::cout << fired->name << ": FAILED, see " << manifest << "\n";
  }
  return code;
}
