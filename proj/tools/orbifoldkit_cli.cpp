// Command-line front end: analyze single instances, trace the quotient
// reduction, sweep the parameter family, analyze abstract portraits, and
// emit schematic figures.  All reports are byte-deterministic for a fixed
// spec and seed; timing goes to stderr only.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orbifoldkit/driver.hpp"
#include "orbifoldkit/errors.hpp"
#include "orbifoldkit/serialization.hpp"

namespace {

// Unreadable or unwritable files map to exit code 4, distinct from
// malformed content (2).
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FileError("cannot read " + path);
  return buf.str();
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!std::cout) throw FileError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw FileError("cannot write " + path);
}

// ORBIFOLDKIT_SEED beats --seed, which beats the seed in the spec file.
void apply_seed_env(unsigned long long& seed) {
  const char* env = std::getenv("ORBIFOLDKIT_SEED");
  if (!env) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw orbifoldkit::InputError("ORBIFOLDKIT_SEED must be a nonnegative integer");
  seed = v;
}

std::vector<int> parse_orders(const std::string& csv) {
  std::vector<int> orders;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw orbifoldkit::InputError("bad order list entry: " + tok);
    }
    if (used != tok.size())
      throw orbifoldkit::InputError("bad order list entry: " + tok);
    orders.push_back(v);
  }
  if (orders.empty()) throw orbifoldkit::InputError("empty order list");
  return orders;
}

void parse_precompose(const std::string& csv, bool& id, bool& f) {
  id = false;
  f = false;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "id") id = true;
    else if (tok == "F") f = true;
    else if (!tok.empty())
      throw orbifoldkit::InputError("precompose choices are id and F, not " + tok);
  }
  if (!id && !f) throw orbifoldkit::InputError("empty precompose list");
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~Timer() {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cerr << "elapsed " << ms << " ms\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact analysis of sphere maps induced by torus endomorphisms"};
  app.require_subcommand(1);

  std::string spec_path, out_path;
  int samples_flag = 0;
  unsigned long long seed_flag = 0;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "full report for one instance, with exact self-checks");
  analyze->add_option("spec", spec_path, "instance JSON file")->required();
  CLI::Option* an_samples =
      analyze->add_option("--samples", samples_flag,
                          "random sample count for the transversality check");
  CLI::Option* an_seed =
      analyze->add_option("--seed", seed_flag, "sample seed");
  analyze->add_option("-o,--output", out_path, "report file (default stdout)");

  CLI::App* quotient = app.add_subcommand(
      "quotient", "analysis plus the full quotient reduction trace");
  quotient->add_option("spec", spec_path, "instance JSON file")->required();
  quotient->add_option("-o,--output", out_path, "report file (default stdout)");

  std::string orders_csv = "2,3,4,6";
  std::string precompose_csv = "id,F";
  long long det_max = 10;
  int entry_max = 2;
  int jobs = 1;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "verify the parabolic-orbifold theorem over a parameter family");
  sweep->add_option("--orders", orders_csv, "rotation orders, comma separated");
  sweep->add_option("--det-max", det_max, "largest |det A|");
  sweep->add_option("--entry-max", entry_max, "entry bound for A");
  sweep->add_option("--precompose", precompose_csv,
                    "precomposition choices from {id,F}");
  sweep->add_option("--jobs", jobs, "worker threads");
  CLI::Option* sw_seed = sweep->add_option("--seed", seed_flag, "sample seed");

  CLI::App* portrait = app.add_subcommand(
      "portrait", "orbifold data of an abstract branch portrait");
  portrait->add_option("portrait", spec_path, "portrait JSON file")->required();

  CLI::App* figure =
      app.add_subcommand("figure", "schematic SVG of one instance");
  figure->add_option("spec", spec_path, "instance JSON file")->required();
  figure->add_option("-o,--output", out_path, "SVG output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*analyze) {
      const orbifoldkit::InstanceSpec spec =
          orbifoldkit::instance_from_json(read_file(spec_path));
      orbifoldkit::RunOptions opt = orbifoldkit::resolve_options(spec.options);
      if (an_samples->count()) {
        if (samples_flag < 0 || samples_flag > 1000000)
          throw orbifoldkit::InputError("samples must be in [0, 1000000]");
        opt.samples = samples_flag;
      }
      if (an_seed->count()) opt.seed = seed_flag;
      apply_seed_env(opt.seed);
      Timer t;
      const orbifoldkit::RunResult r = orbifoldkit::run_analyze(spec, opt);
      write_output(r.report, out_path);
      return r.checks_passed ? 0 : 3;
    }
    if (*quotient) {
      const orbifoldkit::InstanceSpec spec =
          orbifoldkit::instance_from_json(read_file(spec_path));
      orbifoldkit::RunOptions opt = orbifoldkit::resolve_options(spec.options);
      apply_seed_env(opt.seed);
      Timer t;
      const orbifoldkit::RunResult r = orbifoldkit::run_quotient(spec, opt);
      write_output(r.report, out_path);
      return r.checks_passed ? 0 : 3;
    }
    if (*sweep) {
      orbifoldkit::SweepOptions so;
      so.orders = parse_orders(orders_csv);
      so.det_max = orbifoldkit::Int(det_max);
      so.entry_max = entry_max;
      parse_precompose(precompose_csv, so.precompose_identity, so.precompose_f);
      if (jobs < 1 || jobs > 256)
        throw orbifoldkit::InputError("jobs must be in [1, 256]");
      so.jobs = jobs;
      if (sw_seed->count()) so.seed = seed_flag;
      apply_seed_env(so.seed);
      Timer t;
      const orbifoldkit::SweepOutcome outcome = orbifoldkit::run_sweep(so);
      std::ostringstream body;
      body << outcome.table;
      for (const auto& line : outcome.failure_lines)
        body << "FAIL " << line << "\n";
      write_output(body.str(), "");
      return outcome.failures == 0 ? 0 : 3;
    }
    if (*portrait) {
      const orbifoldkit::RamifiedPortrait p =
          orbifoldkit::portrait_from_json(read_file(spec_path));
      Timer t;
      const orbifoldkit::RunResult r = orbifoldkit::run_portrait(p);
      write_output(r.report, "");
      return r.checks_passed ? 0 : 3;
    }
    if (*figure) {
      const orbifoldkit::InstanceSpec spec =
          orbifoldkit::instance_from_json(read_file(spec_path));
      orbifoldkit::RunOptions opt = orbifoldkit::resolve_options(spec.options);
      apply_seed_env(opt.seed);
      Timer t;
      write_output(orbifoldkit::emit_figure(spec, opt), out_path);
      return 0;
    }
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const orbifoldkit::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const orbifoldkit::Error& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
