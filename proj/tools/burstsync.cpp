#include <fstream>
#include <iostream>
#include <string>

#include <burstsync/cli.hpp>
#include <burstsync/experiments.hpp>

namespace {
constexpr int kUsageError = 2;
constexpr int kCapExceeded = 3;
}  // namespace

int main(int argc, char** argv) {
  burstsync::ExperimentConfig cfg;
  std::string command;
  auto app = burstsync::make_cli(cfg, command);
  try {
    app->parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app->exit(e);
  } catch (const CLI::ParseError& e) {
    app->exit(e);
    return kUsageError;
  }

  try {
    if (cfg.output.empty()) {
      burstsync::run(cfg, std::cout, std::cerr);
    } else {
      std::ofstream out(cfg.output, std::ios::binary);
      if (!out) {
        std::cerr << "burstsync: cannot open " << cfg.output << " for writing\n";
        return kUsageError;
      }
      burstsync::run(cfg, out, std::cout);
    }
  } catch (const burstsync::EnumerationCapExceeded& e) {
    std::cerr << "burstsync: refusing: " << e.what() << " (raise --cap to override)\n";
    return kCapExceeded;
  } catch (const std::invalid_argument& e) {
    std::cerr << "burstsync: " << e.what() << '\n';
    return kUsageError;
  }
  return 0;
}
