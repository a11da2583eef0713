// Command line interface: word problem decisions, geometric intersection
// numbers, curve shortening, the legality enumerations and a benchmark
// harness.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "tt/coarse.hpp"
#include "tt/coordinates.hpp"
#include "tt/intersection.hpp"
#include "tt/mcg.hpp"
#include "tt/verifier.hpp"

namespace {

using namespace tt;

Surface parse_surface(const std::vector<int>& gb) {
  if (gb.size() != 2) throw CLI::ValidationError("--surface needs two integers g b");
  return Surface(gb[0], gb[1]);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double ns_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Least squares slope of log(y) against log(x).
double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_word(const Surface& s, const std::string& text, bool naive, bool print_matrix) {
  Word w = parse_word(text);
  IntersectionOptions opt;
  if (naive) opt.naive_cutover = static_cast<std::size_t>(-1);
  const bool ident = is_identity(s, w, opt);
  if (print_matrix) std::cout << matrix_str(dcoord(s, w, opt));
  std::cout << (ident ? "identity" : "non-identity") << std::endl;
  return ident ? 0 : 1;
}

int cmd_intersect(const Surface& s, const std::string& path, bool naive) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CurveFile f = parse_curve_file(in);
  if (!(f.surface == s)) throw std::runtime_error("curve file surface mismatch");
  if (f.curves.size() < 2) throw std::runtime_error("need two curves");
  BigInt n = intersection_from_delta(s, f.curves[0], f.curves[1], naive);
  std::cout << n << std::endl;
  return 0;
}

int cmd_shorten(const Surface& s, const std::string& path, bool trace) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  CurveFile f = parse_curve_file(in);
  if (!(f.surface == s)) throw std::runtime_error("curve file surface mismatch");
  if (f.curves.empty()) throw std::runtime_error("need a curve");
  IntersectionOptions opt;
  std::vector<MoveLog> log;
  if (trace) opt.log = &log;
  ShortenResult res = shorten_curve(s, f.curves[0]);
  std::cout << "rounds " << res.rounds << "\n";
  std::cout << "terminal branches " << res.terminal.pair.live_segment_count() << " weight-bits "
            << (complexity(res.terminal.mu) + complexity(res.terminal.nu)) << "\n";
  std::cout << "update-rule bits " << res.rule.complexity() << "\n";
  if (trace)
    for (const auto& l : log)
      std::cout << "move kind " << static_cast<int>(l.kind) << " at " << l.branch_or_cycle
                << " tightness " << l.tightness_after << " size " << l.shared_size_after
                << "\n";
  return 0;
}

int cmd_verify() {
  auto cuts = verifier::enumerate_cut_disks();
  auto stds = verifier::enumerate_standard_regions();
  std::cout << "cut disks: " << cuts.regions_checked << " regions, " << cuts.nodes_explored
            << " nodes, max depth " << cuts.max_depth << ", " << cuts.violations
            << " violations\n";
  std::cout << "standard regions: " << stds.regions_checked << " composites, "
            << stds.violations << " violations\n";
  std::cout << (cuts.violations + stds.violations) << " violations" << std::endl;
  return cuts.violations + stds.violations == 0 ? 0 : 1;
}

int cmd_bench(const std::string& family, int min_bits, int max_bits, unsigned seed,
              bool include_naive) {
  Surface s(0, 4);
  std::mt19937_64 rng(seed);
  std::cout << "family,bits,naive_ns,fast_ns\n";
  std::vector<std::pair<double, double>> fast_pts, naive_pts;
  for (int bits = min_bits; bits <= max_bits; bits *= 2) {
    BigInt k(1);
    for (int i = 1; i < bits; ++i) {
      k = k.mul2exp(1);
      if (rng() & 1) k += BigInt(1);
    }
    DeltaVector beta{{BigInt(2), BigInt(0), BigInt(4)}};
    DeltaVector tkb{{BigInt(2), BigInt(4) * k, (BigInt(4) * k - BigInt(4)).abs()}};
    (void)family;
    double naive_ns = -1;
    WeightedPair wp = standard_pair_from_delta(s, beta, tkb);
    if (include_naive) {
      auto t0 = std::chrono::steady_clock::now();
      BigInt r = naive_intersection(wp);
      naive_ns = ns_since(t0);
      (void)r;
      naive_pts.push_back({static_cast<double>(bits), naive_ns});
    }
    auto t1 = std::chrono::steady_clock::now();
    BigInt rf = fast_intersection(wp);
    double fast_ns = ns_since(t1);
    (void)rf;
    fast_pts.push_back({static_cast<double>(bits), fast_ns});
    std::cout << "twist," << bits << "," << (naive_ns < 0 ? 0 : naive_ns) << "," << fast_ns
              << "\n";
  }
  if (fast_pts.size() >= 2)
    std::cout << "# fast log-log slope: " << loglog_slope(fast_pts) << "\n";
  if (naive_pts.size() >= 2)
    std::cout << "# naive log-log slope: " << loglog_slope(naive_pts) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"train track pair calculus: word problem, intersection numbers, shortening"};
  app.require_subcommand(1);

  std::vector<int> gb{0, 4};
  std::string word_text, word_file, curves_path, family = "twist";
  bool naive = false, print_matrix = false, trace = false, no_naive = false;
  int min_bits = 1024, max_bits = 1 << 20;
  unsigned seed = 7;

  auto* word = app.add_subcommand("word", "decide whether a word is the identity");
  word->add_option("--surface", gb, "surface g b")->expected(2);
  word->add_option("--word", word_text, "word, e.g. 'Ta Tb^-1'");
  word->add_option("--word-file", word_file, "file with a surface header and a word");
  word->add_flag("--naive", naive, "use the quadratic intersection routine");
  word->add_flag("--print-matrix", print_matrix, "print the coordinate matrix");

  auto* intersect = app.add_subcommand("intersect", "geometric intersection number");
  intersect->add_option("--surface", gb, "surface g b")->expected(2);
  intersect->add_option("--curves", curves_path, "curve file")->required();
  intersect->add_flag("--naive", naive, "use the quadratic routine");

  auto* shorten = app.add_subcommand("shorten", "shorten a curve's carrier");
  shorten->add_option("--surface", gb, "surface g b")->expected(2);
  shorten->add_option("--curves", curves_path, "curve file")->required();
  shorten->add_flag("--trace", trace, "print the move trace");

  app.add_subcommand("verify", "re-run the legality enumerations");

  auto* bench = app.add_subcommand("bench", "benchmark the twist family");
  bench->add_option("--family", family, "bench family (twist)");
  bench->add_option("--min-bits", min_bits, "smallest exponent size");
  bench->add_option("--max-bits", max_bits, "largest exponent size");
  bench->add_option("--seed", seed, "random seed");
  bench->add_flag("--no-naive", no_naive, "skip the quadratic baseline");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("word")) {
      std::string text = word_text;
      Surface s = parse_surface(gb);
      if (!word_file.empty()) {
        std::istringstream in(read_file(word_file));
        std::string kw;
        int g, b;
        if (!(in >> kw >> g >> b) || kw != "surface") throw std::runtime_error("bad word file");
        s = Surface(g, b);
        std::getline(in, text);
        std::ostringstream rest;
        rest << in.rdbuf();
        text += rest.str();
      }
      return cmd_word(s, text, naive, print_matrix);
    }
    if (app.got_subcommand("intersect"))
      return cmd_intersect(parse_surface(gb), curves_path, naive);
    if (app.got_subcommand("shorten")) return cmd_shorten(parse_surface(gb), curves_path, trace);
    if (app.got_subcommand("verify")) return cmd_verify();
    if (app.got_subcommand("bench"))
      return cmd_bench(family, min_bits, max_bits, seed, !no_naive);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 2;
}
