// densitrace: deletion-channel simulation, k-mer density / deck estimation,
// bound calculators, and source reconstruction, with reproducible outputs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "densitrace/analysis.hpp"
#include "densitrace/bitstring.hpp"
#include "densitrace/channel.hpp"
#include "densitrace/deck.hpp"
#include "densitrace/density.hpp"
#include "densitrace/exact_oracle.hpp"
#include "densitrace/format.hpp"
#include "densitrace/parallel.hpp"
#include "densitrace/reconstruct.hpp"
#include "densitrace/version.hpp"
#include "verify_suites.hpp"

namespace {

using namespace densitrace;

/// Writable sink for `--out`; "-" means stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") {
      stream_ = &std::cout;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw IoError("cannot open output file: " + path);
    stream_ = file_.get();
  }

  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string version_line() { return std::string("densitrace ") + kVersion; }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  return in;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  if (out.empty()) throw IoError("empty list: '" + text + "'");
  return out;
}

/// "a:b:count" inclusive grid.
std::vector<double> parse_grid(const std::string& text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw IoError("grid must look like start:stop:count");
  }
  const double start = parse_double(text.substr(0, c1));
  const double stop = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
  const std::uint64_t count = parse_u64(text.substr(c2 + 1));
  if (count < 1) throw IoError("grid count must be >= 1");
  std::vector<double> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(count == 1 ? start
                             : start + static_cast<double>(i) * (stop - start) /
                                           static_cast<double>(count - 1));
  }
  return out;
}

struct GenArgs {
  std::string source;
  double p = 0.0;
  std::uint64_t t = 1;
  std::uint64_t seed = 0;
  std::string out = "-";
};

struct EstimateArgs {
  std::string traces_path;
  std::string source;
  double p = 0.0;
  std::uint64_t t = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t k = 2;
  std::string out = "-";
};

int run_cli(int argc, char** argv) {
  CLI::App app{"deletion-channel density maps, subword decks and reconstruction"};
  app.set_version_flag("--version", version_line());
  app.require_subcommand(1);
  app.fallthrough();  // global flags (--threads) may follow the subcommand

  // applied while parsing, before any subcommand callback runs
  app.add_option_function<unsigned>(
      "--threads", [](unsigned t) { set_worker_threads(t); },
      "worker threads (0 = hardware default; never affects results)");

  int exit_code = 0;

  // ---- gen ----------------------------------------------------------------
  auto gen_args = std::make_shared<GenArgs>();
  {
    auto* cmd = app.add_subcommand("gen", "sample traces from the deletion channel");
    cmd->add_option("--source", gen_args->source, "source bit string")->required();
    cmd->add_option("--p", gen_args->p, "deletion probability")->required();
    cmd->add_option("--t", gen_args->t, "number of traces")->required();
    cmd->add_option("--seed", gen_args->seed, "RNG seed")->required();
    cmd->add_option("--out", gen_args->out, "output path or -");
    cmd->callback([gen_args] {
      const BitString s = BitString::parse(gen_args->source);
      const TraceSet traces =
          sample_traces(s, ChannelParams(gen_args->p, gen_args->seed), gen_args->t);
      Output out(gen_args->out);
      write_traces(out.stream(), traces,
                   {version_line(), "cmd=gen source=" + gen_args->source});
    });
  }

  // ---- oracle -------------------------------------------------------------
  {
    struct Args {
      std::string source;
      double p = 0.0;
      std::size_t k = 2;
      std::string out = "-";
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("oracle", "exact trace statistics by mask enumeration");
    cmd->add_option("--source", args->source, "source bit string (length <= 16)")->required();
    cmd->add_option("--p", args->p, "deletion probability")->required();
    cmd->add_option("--k", args->k, "minimum substring length")->required();
    cmd->add_option("--out", args->out, "output path or -");
    cmd->callback([args] {
      const BitString s = BitString::parse(args->source);
      const ExactStats stats = exact_statistics(s, args->p, args->k);
      Output out(args->out);
      auto& os = out.stream();
      os << "# " << version_line() << '\n';
      os << "# cmd=oracle source=" << args->source << " p=" << format_double(args->p)
         << " k=" << args->k << '\n';
      os << "kind,string,i,value\n";
      for (std::size_t len = args->k; len <= s.size(); ++len) {
        for (const auto& y : stats.observed_strings(len)) {
          for (std::size_t i = 1; i <= s.size(); ++i) {
            const double prob = stats.position_prob(y, i);
            if (prob != 0.0) {
              os << "P," << y.str() << ',' << i << ',' << format_double(prob) << '\n';
            }
          }
        }
      }
      for (std::size_t len = args->k; len <= s.size(); ++len) {
        for (const auto& y : stats.observed_strings(len)) {
          os << "E," << y.str() << ",," << format_double(stats.occurrence_mean(y)) << '\n';
        }
      }
    });
  }

  // ---- density ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("density", "k-mer density maps");
    cmd->require_subcommand(1);

    struct ExactArgs {
      std::string source;
      std::size_t k = 2;
      double p = 0.0;
      std::string out = "-";
    };
    auto exact_args = std::make_shared<ExactArgs>();
    auto* exact_cmd = cmd->add_subcommand("exact", "exact map by direct kernel evaluation");
    exact_cmd->add_option("--source", exact_args->source)->required();
    exact_cmd->add_option("--k", exact_args->k)->required();
    exact_cmd->add_option("--p", exact_args->p)->required();
    exact_cmd->add_option("--out", exact_args->out);
    exact_cmd->callback([exact_args] {
      const DensityMap map =
          exact_density_map(BitString::parse(exact_args->source), exact_args->k, exact_args->p);
      Output out(exact_args->out);
      write_density_csv(out.stream(), map,
                        {version_line(),
                         "cmd=density-exact source=" + exact_args->source +
                             " k=" + std::to_string(exact_args->k) +
                             " p=" + format_double(exact_args->p) +
                             " n=" + std::to_string(map.n())});
    });

    auto est = std::make_shared<EstimateArgs>();
    auto* est_cmd = cmd->add_subcommand("estimate", "unbiased map estimate from traces");
    est_cmd->add_option("--traces", est->traces_path, "traces file (from gen)");
    est_cmd->add_option("--source", est->source, "stream traces from this source instead");
    est_cmd->add_option("--p", est->p, "deletion probability (streaming mode)");
    est_cmd->add_option("--t", est->t, "trace count (streaming mode)");
    auto* seed_opt = est_cmd->add_option("--seed", est->seed, "RNG seed (streaming mode)");
    est_cmd->add_option("--k", est->k)->required();
    est_cmd->add_option("--out", est->out);
    est_cmd->callback([est, seed_opt] {
      est->seed_set = seed_opt->count() > 0;
      if (!est->traces_path.empty() && !est->source.empty()) {
        throw CLI::ValidationError("--traces and --source are mutually exclusive");
      }
      DensityMap map;
      std::string provenance;
      if (!est->traces_path.empty()) {
        auto in = open_input(est->traces_path);
        const TraceSet traces = read_traces(in);
        map = estimate_density_map(traces, est->k, traces.params.p);
        provenance = "cmd=density-estimate traces=" + est->traces_path +
                     " k=" + std::to_string(est->k) + " p=" + format_double(traces.params.p) +
                     " n=" + std::to_string(traces.source_length) +
                     " T=" + std::to_string(traces.count());
      } else {
        if (est->source.empty() || !est->seed_set) {
          throw CLI::ValidationError("estimate needs --traces or --source/--p/--t/--seed");
        }
        const BitString s = BitString::parse(est->source);
        map = estimate_density_map_streamed(s, ChannelParams(est->p, est->seed), est->t, est->k);
        provenance = "cmd=density-estimate source=" + est->source +
                     " k=" + std::to_string(est->k) + " p=" + format_double(est->p) +
                     " seed=" + std::to_string(est->seed) + " T=" + std::to_string(est->t);
      }
      Output out(est->out);
      write_density_csv(out.stream(), map, {version_line(), provenance});
    });
  }

  // ---- deck ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("deck", "k-subword decks");
    cmd->require_subcommand(1);

    struct ExactArgs {
      std::string source;
      std::size_t k = 2;
      std::string out = "-";
    };
    auto exact_args = std::make_shared<ExactArgs>();
    auto* exact_cmd = cmd->add_subcommand("exact", "exact deck by scanning the source");
    exact_cmd->add_option("--source", exact_args->source)->required();
    exact_cmd->add_option("--k", exact_args->k)->required();
    exact_cmd->add_option("--out", exact_args->out);
    exact_cmd->callback([exact_args] {
      const Deck deck = exact_deck(BitString::parse(exact_args->source), exact_args->k);
      Output out(exact_args->out);
      write_deck_tsv(out.stream(), deck,
                     {version_line(), "cmd=deck-exact source=" + exact_args->source +
                                          " k=" + std::to_string(exact_args->k)});
    });

    auto est = std::make_shared<EstimateArgs>();
    std::shared_ptr<std::string> mode = std::make_shared<std::string>("full");
    auto* est_cmd = cmd->add_subcommand("estimate", "deck estimate from traces");
    est_cmd->add_option("--traces", est->traces_path, "traces file (from gen)");
    est_cmd->add_option("--source", est->source, "stream traces from this source instead");
    est_cmd->add_option("--p", est->p, "deletion probability (streaming mode)");
    est_cmd->add_option("--t", est->t, "trace count (streaming mode)");
    auto* seed_opt = est_cmd->add_option("--seed", est->seed, "RNG seed (streaming mode)");
    est_cmd->add_option("--k", est->k)->required();
    est_cmd->add_option("--mode", *mode, "full or truncated")
        ->check(CLI::IsMember({"full", "truncated"}));
    est_cmd->add_option("--out", est->out);
    est_cmd->callback([est, mode, seed_opt] {
      est->seed_set = seed_opt->count() > 0;
      if (!est->traces_path.empty() && !est->source.empty()) {
        throw CLI::ValidationError("--traces and --source are mutually exclusive");
      }
      const DeckMode deck_mode = *mode == "full" ? DeckMode::full : DeckMode::truncated;
      Deck deck;
      std::string provenance;
      if (!est->traces_path.empty()) {
        auto in = open_input(est->traces_path);
        const TraceSet traces = read_traces(in);
        deck = estimate_deck(traces, est->k, traces.params.p, deck_mode);
        provenance = "cmd=deck-estimate traces=" + est->traces_path +
                     " k=" + std::to_string(est->k) + " mode=" + *mode +
                     " p=" + format_double(traces.params.p) +
                     " T=" + std::to_string(traces.count());
      } else {
        if (est->source.empty() || !est->seed_set) {
          throw CLI::ValidationError("estimate needs --traces or --source/--p/--t/--seed");
        }
        const BitString s = BitString::parse(est->source);
        deck = estimate_deck_streamed(s, ChannelParams(est->p, est->seed), est->t, est->k,
                                      deck_mode);
        provenance = "cmd=deck-estimate source=" + est->source + " k=" + std::to_string(est->k) +
                     " mode=" + *mode + " p=" + format_double(est->p) +
                     " seed=" + std::to_string(est->seed) + " T=" + std::to_string(est->t);
      }
      Output out(est->out);
      write_deck_tsv(out.stream(), deck, {version_line(), provenance});
    });
  }

  // ---- distinguish ----------------------------------------------------------
  {
    struct Args {
      std::string traces_path;
      std::string candidates;
      std::size_t k = 2;
      std::string out = "-";
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("distinguish",
                                   "pick the candidate source nearest in density distance");
    cmd->add_option("--traces", args->traces_path)->required();
    cmd->add_option("--candidates", args->candidates, "comma-separated candidate strings")
        ->required();
    cmd->add_option("--k", args->k)->required();
    cmd->add_option("--out", args->out);
    cmd->callback([args] {
      auto in = open_input(args->traces_path);
      const TraceSet traces = read_traces(in);
      std::vector<BitString> candidates;
      std::stringstream ss(args->candidates);
      std::string item;
      while (std::getline(ss, item, ',')) candidates.push_back(BitString::parse(item));
      const std::size_t winner = distinguish(traces, candidates, args->k, traces.params.p);
      Output out(args->out);
      out.stream() << "# " << version_line() << '\n'
                   << "# cmd=distinguish traces=" << args->traces_path << " k=" << args->k
                   << " candidates=" << candidates.size() << '\n'
                   << winner << '\n';
    });
  }

  // ---- reconstruct ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("reconstruct", "recover a source string");
    cmd->require_subcommand(1);

    struct MergeArgs {
      std::string deck_path;
      std::uint64_t n = 0;
      std::string out = "-";
    };
    auto merge_args = std::make_shared<MergeArgs>();
    auto* merge_cmd =
        cmd->add_subcommand("merge", "unique prefix-suffix merge (repeat-free sources)");
    merge_cmd->add_option("--deck", merge_args->deck_path)->required();
    merge_cmd->add_option("--n", merge_args->n, "source length")->required();
    merge_cmd->add_option("--out", merge_args->out);
    merge_cmd->callback([merge_args] {
      auto in = open_input(merge_args->deck_path);
      const Deck deck = read_deck_tsv(in);
      const BitString s = merge_reconstruct(deck, merge_args->n);
      Output out(merge_args->out);
      out.stream() << "# " << version_line() << '\n'
                   << "# cmd=reconstruct-merge deck=" << merge_args->deck_path
                   << " n=" << merge_args->n << '\n'
                   << s.str() << '\n';
    });

    struct RidgeArgs {
      std::string map_path;
      double p = 0.0;
      double lambda = 1e-3;
      double tau = 0.5;
      std::string out = "-";
    };
    auto ridge_args = std::make_shared<RidgeArgs>();
    auto* ridge_cmd = cmd->add_subcommand("ridge", "ridge inversion plus majority voting");
    ridge_cmd->add_option("--map", ridge_args->map_path, "density CSV")->required();
    ridge_cmd->add_option("--p", ridge_args->p)->required();
    ridge_cmd->add_option("--lambda", ridge_args->lambda);
    ridge_cmd->add_option("--tau", ridge_args->tau);
    ridge_cmd->add_option("--out", ridge_args->out);
    ridge_cmd->callback([ridge_args] {
      auto in = open_input(ridge_args->map_path);
      const DensityMap map = read_density_csv(in);
      const BitString s = ridge_reconstruct(map, map.n(), map.k(), ridge_args->p,
                                            ridge_args->lambda, ridge_args->tau);
      Output out(ridge_args->out);
      out.stream() << "# " << version_line() << '\n'
                   << "# cmd=reconstruct-ridge map=" << ridge_args->map_path
                   << " p=" << format_double(ridge_args->p)
                   << " lambda=" << format_double(ridge_args->lambda)
                   << " tau=" << format_double(ridge_args->tau) << '\n'
                   << s.str() << '\n';
    });

    struct DotArgs {
      std::string deck_path;
      std::string out = "-";
    };
    auto dot_args = std::make_shared<DotArgs>();
    auto* dot_cmd = cmd->add_subcommand("debruijn", "export the deck's graph as DOT");
    dot_cmd->add_option("--deck", dot_args->deck_path)->required();
    dot_cmd->add_option("--out", dot_args->out);
    dot_cmd->callback([dot_args] {
      auto in = open_input(dot_args->deck_path);
      const Deck deck = read_deck_tsv(in);
      const DeBruijnGraph graph = build_debruijn(deck);
      Output out(dot_args->out);
      write_dot(out.stream(), graph,
                {version_line(), "cmd=reconstruct-debruijn deck=" + dot_args->deck_path});
    });
  }

  // ---- bounds ---------------------------------------------------------------
  {
    struct Args {
      std::string c_list;
      std::string p_grid;
      std::uint64_t n = 1000;
      std::string out = "-";
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("bounds", "bound functions over a (p, c) grid as CSV");
    cmd->add_option("--c", args->c_list, "comma-separated c values")->required();
    cmd->add_option("--p-grid", args->p_grid, "start:stop:count grid over p")->required();
    cmd->add_option("--n", args->n, "source length for f_c(n) and d");
    cmd->add_option("--out", args->out);
    cmd->callback([args] {
      const std::vector<double> cs = parse_double_list(args->c_list);
      const std::vector<double> ps = parse_grid(args->p_grid);
      Output out(args->out);
      write_bounds_csv(out.stream(), cs, ps, args->n,
                       {version_line(), "cmd=bounds c=" + args->c_list +
                                            " p-grid=" + args->p_grid +
                                            " n=" + std::to_string(args->n)});
    });
  }

  // ---- budget ---------------------------------------------------------------
  {
    struct Args {
      std::string kind = "map";
      std::uint64_t n = 0;
      std::uint64_t k = 0;
      double c = 0.0;
      double p = 0.0;
      double eps = 0.0;
      double delta = 0.0;
      std::string out = "-";
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("budget", "sufficient trace count for density estimation");
    cmd->add_option("--kind", args->kind)->check(CLI::IsMember({"entry", "map"}));
    cmd->add_option("--n", args->n)->required();
    auto* k_opt = cmd->add_option("--k", args->k, "k-mer size (sets c = k / log2 n)");
    auto* c_opt = cmd->add_option("--c", args->c, "c directly");
    k_opt->excludes(c_opt);
    cmd->add_option("--p", args->p)->required();
    cmd->add_option("--eps", args->eps)->required();
    cmd->add_option("--delta", args->delta)->required();
    cmd->add_option("--out", args->out);
    cmd->callback([args, k_opt, c_opt] {
      if (k_opt->count() == 0 && c_opt->count() == 0) {
        throw CLI::ValidationError("budget needs --k or --c");
      }
      const double c = k_opt->count() > 0
                           ? static_cast<double>(args->k) / std::log2(static_cast<double>(args->n))
                           : args->c;
      const BudgetKind kind = args->kind == "map" ? BudgetKind::map : BudgetKind::entry;
      const std::uint64_t budget =
          traces_needed(kind, args->n, c, args->p, args->eps, args->delta);
      Output out(args->out);
      out.stream() << "# " << version_line() << '\n'
                   << "# cmd=budget kind=" << args->kind << " n=" << args->n
                   << " c=" << format_double(c) << " p=" << format_double(args->p)
                   << " eps=" << format_double(args->eps)
                   << " delta=" << format_double(args->delta) << '\n'
                   << budget << '\n';
    });
  }

  // ---- verify ---------------------------------------------------------------
  {
    struct Args {
      std::string suite;
      verify::SuiteOptions options;
      std::string out = "-";
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("verify", "oracle-backed identity suites");
    cmd->add_option("--suite", args->suite)->required();
    auto* seed_opt = cmd->add_option("--seed", args->options.seed, "seed for randomized suites");
    cmd->add_option("--n", args->options.n);
    cmd->add_option("--p", args->options.p);
    cmd->add_option("--trials", args->options.trials);
    cmd->add_option("--t", args->options.traces, "traces per distinguish trial");
    cmd->add_option("--instances", args->options.instances);
    cmd->add_option("--out", args->out);
    cmd->callback([args, seed_opt, &exit_code] {
      if (!verify::known_suite(args->suite)) {
        throw CLI::ValidationError("unknown suite: " + args->suite);
      }
      if (verify::suite_needs_seed(args->suite) && seed_opt->count() == 0) {
        throw CLI::ValidationError("suite " + args->suite + " is randomized; --seed is required");
      }
      Output out(args->out);
      out.stream() << "# " << version_line() << '\n'
                   << "# cmd=verify suite=" << args->suite << " n=" << args->options.n
                   << " p=" << format_double(args->options.p)
                   << " seed=" << args->options.seed << '\n';
      if (!verify::run_suite(args->suite, args->options, out.stream())) exit_code = 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << e.what() << '\n';
    return 2;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const densitrace::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
