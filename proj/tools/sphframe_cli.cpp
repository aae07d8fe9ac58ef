// sphframe: command-line front end for spherical Haar framelets.

#include "sphframe/denoise.hpp"
#include "sphframe/errors.hpp"
#include "sphframe/filter_bank.hpp"
#include "sphframe/image.hpp"
#include "sphframe/io.hpp"
#include "sphframe/partition.hpp"
#include "sphframe/signal.hpp"
#include "sphframe/transform.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace sphframe;

namespace {

struct Options {
  int verbosity = 0;
  // shared paths
  std::string in, out, ref, est, dataset, partition, out_dir;
  int depth = 6;
  int level = 6;
  int levels = 2;
  std::string method = "bivariate";
  double rate = 0.1;
  std::uint64_t seed = 1;
  double lambda = -1.0;
  int window = 2;
  double r = 0.3;
  bool add_noise = false;
  std::string rates = "0.05,0.1,0.2,0.5";
  std::string methods = "all";
  double fmax = -1.0;
  int count = 20;
};

void log(const Options& o, const std::string& msg) {
  if (o.verbosity > 0) std::cerr << msg << "\n";
}

PartitionTree load_or_build(const Options& o, int level) {
  if (!o.partition.empty()) {
    auto tree = io::decode_partition(io::read_file(o.partition));
    if (tree.depth() < level)
      throw Error(ErrorKind::level_range, "partition cache is shallower than the requested level");
    return tree;
  }
  return PartitionTree::build(level);
}

void require_level(int level) {
  if (level < 0) throw Error(ErrorKind::domain, "level must be nonnegative");
  if (level > kMaxDepth)
    throw Error(ErrorKind::depth_limit, "level " + std::to_string(level) + " exceeds " +
                                            std::to_string(kMaxDepth));
}

int coarse_from_levels(int fine, int levels) {
  const int coarse = fine - levels;
  if (levels < 1 || coarse < 0)
    throw Error(ErrorKind::level_range, "--levels must be in [1, J]");
  return coarse;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() || v < 0.0) throw Error(ErrorKind::domain, "bad rate '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<Shrinkage> parse_methods(const std::string& text) {
  if (text == "all") return {std::begin(kAllShrinkage), std::end(kAllShrinkage)};
  std::vector<Shrinkage> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_shrinkage(item));
  return out;
}

void cmd_partition(const Options& o) {
  require_level(o.depth);
  const auto tree = PartitionTree::build(o.depth);
  io::write_file(o.out, io::encode_partition(tree));
  for (int j = 0; j <= tree.depth(); ++j) {
    double dev = 0.0;
    for (const auto& rect : tree.level(j))
      dev = std::max(dev, std::abs(cap_area(rect) - PartitionTree::target_area(j)));
    std::printf("level %d blocks/face %zu max area deviation %.3e\n", j, tree.blocks_per_face(j), dev);
  }
}

void cmd_ingest(const Options& o) {
  require_level(o.level);
  const Grid grid = image::read_image(o.in);
  const auto tree = load_or_build(o, o.level);
  const auto signal = sample_image(grid, tree, o.level);
  io::write_file(o.out, io::encode_signal(signal));
  log(o, "ingested " + std::to_string(grid.width) + "x" + std::to_string(grid.height) + " -> " +
             std::to_string(signal.size()) + " values");
}

void cmd_decompose(const Options& o) {
  const auto signal = io::decode_signal(io::read_file(o.in));
  const auto coeffs =
      decompose(signal, banks::spherical(), coarse_from_levels(signal.level(), o.levels));
  io::write_file(o.out, io::encode_coefficients(coeffs));
}

void cmd_reconstruct(const Options& o) {
  const auto coeffs = io::decode_coefficients(io::read_file(o.in));
  auto values = reconstruct(coeffs, banks::spherical());
  double f_max = o.fmax;
  if (f_max < 0.0)
    for (double v : values) f_max = std::max(f_max, std::abs(v));
  io::write_file(o.out, io::encode_signal(SphericalSignal(coeffs.fine_level, std::move(values),
                                                          std::max(f_max, 0.0))));
}

void cmd_add_noise(const Options& o) {
  const auto signal = io::decode_signal(io::read_file(o.in));
  const auto noisy = add_noise(signal, NoiseSpec::from_rate(o.rate, signal.f_max(), o.seed));
  io::write_file(o.out, io::encode_signal(noisy));
}

void cmd_denoise(const Options& o) {
  auto signal = io::decode_signal(io::read_file(o.in));
  const auto spec = NoiseSpec::from_rate(o.rate, signal.f_max(), o.seed);
  if (o.add_noise) signal = add_noise(signal, spec);
  ShrinkageParams params;
  params.method = parse_shrinkage(o.method);
  params.lambda_s = o.lambda >= 0.0 ? o.lambda : default_lambda_s(o.rate, signal.f_max());
  params.window_half = o.window;
  params.r = o.r;
  const auto result = denoise(signal, banks::spherical(), coarse_from_levels(signal.level(), o.levels),
                              spec.sigma, params);
  io::write_file(o.out, io::encode_signal(result));
}

void cmd_psnr(const Options& o) {
  const auto a = io::decode_signal(io::read_file(o.ref));
  const auto b = io::decode_signal(io::read_file(o.est));
  const double db = psnr(a, b);
  if (std::isinf(db))
    std::printf("inf\n");
  else
    std::printf("%.2f\n", db);
}

void cmd_experiment(const Options& o) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(o.dataset, ec))
    if (entry.path().extension() == ".sphs") files.push_back(entry.path());
  if (ec) throw Error(ErrorKind::io, "cannot list " + o.dataset);
  std::sort(files.begin(), files.end());
  std::vector<SphericalSignal> data;
  for (const auto& f : files) data.push_back(io::decode_signal(io::read_file(f)));
  if (data.empty()) throw Error(ErrorKind::empty_input, "no .sphs files in " + o.dataset);

  ExperimentConfig cfg;
  cfg.rates = parse_rates(o.rates);
  cfg.methods = parse_methods(o.methods);
  cfg.coarse_level = coarse_from_levels(data.front().level(), o.levels);
  cfg.seed = o.seed;
  cfg.window_half = o.window;
  cfg.r = o.r;
  if (o.lambda >= 0.0) cfg.lambda_s = o.lambda;
  const auto report = run_experiment(data, banks::spherical(), cfg, fs::path(o.dataset).filename().string());
  io::write_file(o.out, io::encode_report(report));
  for (const auto& c : report.cells)
    std::printf("rate %.2f %-10s before %6.2f after %6.2f (%+.2f)\n", c.rate, to_string(c.method),
                c.psnr_before_mean, c.psnr_after_mean, c.improvement);
}

void cmd_export_filters(const Options& o) {
  io::write_file(o.out, io::encode_filter_bank(banks::spherical()));
}

void cmd_rasterize(const Options& o) {
  const auto signal = io::decode_signal(io::read_file(o.in));
  image::export_rasters(signal, o.out_dir);
}

void cmd_synth(const Options& o) {
  require_level(o.level);
  const auto tree = load_or_build(o, o.level);
  const auto data = synthetic_piecewise_constant(tree, o.level, o.count, o.seed);
  fs::create_directories(o.out_dir);
  for (std::size_t k = 0; k < data.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "synth_%03zu.sphs", k);
    io::write_file(fs::path(o.out_dir) / name, io::encode_signal(data[k]));
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Equal-area sphere partitions, framelet transforms and shrinkage denoising"};
  app.name("sphframe");
  app.set_help_all_flag("--help-all", "Print help for every subcommand");
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", o.verbosity, "Verbose diagnostics on stderr");

  auto* part = app.add_subcommand("partition", "Build the face-1 partition cache (SPHP)");
  part->add_option("-J,--depth", o.depth, "Partition depth (<= 12)")->required();
  part->add_option("-o,--out", o.out, "Output .sphp file")->required();

  auto* ingest = app.add_subcommand("ingest", "Sample an equirectangular PGM/PNG image (SPHS)");
  ingest->add_option("-i,--in", o.in, "Input grayscale image")->required()->check(CLI::ExistingFile);
  ingest->add_option("-J,--level", o.level, "Sampling level J")->required();
  ingest->add_option("-o,--out", o.out, "Output .sphs file")->required();
  ingest->add_option("--partition", o.partition, "Optional .sphp cache")->check(CLI::ExistingFile);

  auto* dec = app.add_subcommand("decompose", "Multilevel framelet decomposition (SPHS -> SPHC)");
  dec->add_option("-i,--in", o.in, "Input .sphs")->required()->check(CLI::ExistingFile);
  dec->add_option("-K,--levels", o.levels, "Number of levels J-L")->required();
  dec->add_option("-o,--out", o.out, "Output .sphc")->required();

  auto* rec = app.add_subcommand("reconstruct", "Framelet reconstruction (SPHC -> SPHS)");
  rec->add_option("-i,--in", o.in, "Input .sphc")->required()->check(CLI::ExistingFile);
  rec->add_option("-o,--out", o.out, "Output .sphs")->required();
  rec->add_option("--fmax", o.fmax, "Peak value recorded in the output (default: max |value|)");

  auto* noise = app.add_subcommand("add-noise", "Add seeded Gaussian noise, sigma = rate * f_max");
  noise->add_option("-i,--in", o.in, "Input .sphs")->required()->check(CLI::ExistingFile);
  noise->add_option("-o,--out", o.out, "Output .sphs")->required();
  noise->add_option("--rate", o.rate, "Noise rate")->required();
  noise->add_option("--seed", o.seed, "RNG seed");

  auto* den = app.add_subcommand("denoise", "Threshold denoising of a noisy signal");
  den->add_option("-i,--in", o.in, "Input .sphs (noisy)")->required()->check(CLI::ExistingFile);
  den->add_option("-o,--out", o.out, "Output .sphs")->required();
  den->add_option("--method", o.method, "soft | localsoft | bivariate")
      ->check(CLI::IsMember({"soft", "localsoft", "local_soft", "bivariate"}));
  den->add_option("--rate", o.rate, "Noise rate; sigma = rate * f_max")->required();
  den->add_option("-K,--levels", o.levels, "Decomposition levels J-L")->required();
  den->add_option("--seed", o.seed, "RNG seed used with --add-noise");
  den->add_flag("--add-noise", o.add_noise, "Corrupt the input with noise at --rate first");
  den->add_option("--lambda", o.lambda, "Soft threshold (default 0.9 * rate * f_max)");
  den->add_option("--window", o.window, "Local window half-width");
  den->add_option("--r", o.r, "Local threshold scale");

  auto* ps = app.add_subcommand("psnr", "PSNR in dB of an estimate against a reference");
  ps->add_option("--ref", o.ref, "Reference .sphs")->required()->check(CLI::ExistingFile);
  ps->add_option("--est", o.est, "Estimate .sphs")->required()->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("experiment", "Noise/denoise PSNR table over a dataset of .sphs");
  exp->add_option("--dataset", o.dataset, "Directory of .sphs files")->required()->check(CLI::ExistingDirectory);
  exp->add_option("--rates", o.rates, "Comma-separated noise rates");
  exp->add_option("--methods", o.methods, "Comma-separated methods or 'all'");
  exp->add_option("-K,--levels", o.levels, "Decomposition levels J-L")->required();
  exp->add_option("-o,--out", o.out, "Output report .json")->required();
  exp->add_option("--seed", o.seed, "Master RNG seed");
  exp->add_option("--lambda", o.lambda, "Fixed soft threshold (default 0.9 * rate * f_max)");
  exp->add_option("--window", o.window, "Local window half-width");
  exp->add_option("--r", o.r, "Local threshold scale");

  auto* fb = app.add_subcommand("export-filters", "Write the spherical filter bank document");
  fb->add_option("-o,--out", o.out, "Output text file")->required();

  auto* ras = app.add_subcommand("rasterize", "Export six face PGMs and a JSON sidecar");
  ras->add_option("-i,--in", o.in, "Input .sphs")->required()->check(CLI::ExistingFile);
  ras->add_option("-d,--out-dir", o.out_dir, "Output directory")->required();

  auto* syn = app.add_subcommand("synth", "Generate piecewise-constant test signals");
  syn->add_option("-J,--level", o.level, "Level J")->required();
  syn->add_option("--count", o.count, "Number of signals");
  syn->add_option("--seed", o.seed, "RNG seed");
  syn->add_option("-d,--out-dir", o.out_dir, "Output directory")->required();
  syn->add_option("--partition", o.partition, "Optional .sphp cache")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*part) cmd_partition(o);
    else if (*ingest) cmd_ingest(o);
    else if (*dec) cmd_decompose(o);
    else if (*rec) cmd_reconstruct(o);
    else if (*noise) cmd_add_noise(o);
    else if (*den) cmd_denoise(o);
    else if (*ps) cmd_psnr(o);
    else if (*exp) cmd_experiment(o);
    else if (*fb) cmd_export_filters(o);
    else if (*ras) cmd_rasterize(o);
    else if (*syn) cmd_synth(o);
  } catch (const Error& e) {
    std::cerr << "sphframe: " << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "sphframe: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
