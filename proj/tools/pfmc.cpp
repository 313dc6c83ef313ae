// pfmc — phase-field interface simulator and verifier on the flat torus.
//
// Subcommands:
//   run     execute a run; write diag.csv, snapshots, monotonicity reports
//   verify  run the invariant suite and print one PASS/FAIL line per check
//   sweep   repeat the run over sweep.eps with h = eps/4; write sweep.csv
//   oracle  print closed-form reference values for the config
//
// Exit codes: 0 all good, 1 failed check or invariant abort, 2 bad usage,
// malformed config, or I/O failure.

#include <exception>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <boost/program_options.hpp>

#include "pfmc/config.hpp"
#include "pfmc/driver.hpp"

namespace po = boost::program_options;

namespace {

int usage(std::ostream& os, const po::options_description& opts, int code) {
  os << "usage: pfmc <run|verify|sweep|oracle> --config PATH [options]\n" << opts;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  po::options_description opts("options");
  opts.add_options()                                                        //
      ("help,h", "print this help")                                        //
      ("config", po::value<std::string>(), "path to the run config file")  //
      ("out", po::value<std::string>(), "output directory (overrides run.out)")  //
      ("workers", po::value<int>(), "worker threads (overrides run.workers)")    //
      ("seed", po::value<unsigned>(), "reserved; dynamics are deterministic");

  po::options_description hidden;
  hidden.add_options()("command", po::value<std::string>(), "subcommand");
  po::positional_options_description pos;
  pos.add("command", 1);
  po::options_description all;
  all.add(opts).add(hidden);

  po::variables_map vm;
  try {
    po::store(
        po::command_line_parser(argc, argv).options(all).positional(pos).run(), vm);
    po::notify(vm);
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return usage(std::cout, opts, 2);
  }

  if (vm.count("help") || !vm.count("command")) return usage(std::cout, opts, vm.count("help") ? 0 : 2);
  const std::string command = vm["command"].as<std::string>();
  if (command != "run" && command != "verify" && command != "sweep" && command != "oracle") {
    std::cout << "error: unknown command '" << command << "'\n";
    return usage(std::cout, opts, 2);
  }
  if (!vm.count("config")) {
    std::cout << "error: --config is required\n";
    return usage(std::cout, opts, 2);
  }

  try {
    const std::string path = vm["config"].as<std::string>();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::cout << "error: cannot open config '" << path << "'\n";
      return 2;
    }
    const std::string text((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    pfmc::RunConfig cfg = pfmc::parse_run_config(text);
    if (vm.count("out")) cfg.out = vm["out"].as<std::string>();
    if (vm.count("workers")) cfg.workers = vm["workers"].as<int>();
    if (cfg.workers < 1) {
      std::cout << "error: workers must be >= 1\n";
      return 2;
    }

    if (command == "run") return pfmc::cmd_run(cfg);
    if (command == "verify") return pfmc::cmd_verify(cfg);
    if (command == "sweep") return pfmc::cmd_sweep(cfg);
    return pfmc::cmd_oracle(cfg);
  } catch (const pfmc::invariant_violation& e) {
    std::cout << "error: invariant: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 2;
  }
}
