#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wordeq/wordeq.hpp"

namespace fs = std::filesystem;
using namespace wordeq;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUnknown = 30;
constexpr int kExitError = 1;

struct SolveFlags {
  std::string strategy = "bt2";
  std::string order = "fixed";
  std::string model;
  std::uint64_t seed = 0;
  double timeout = 300.0;
  int l_bt2 = 500;
  int l_bt2_step = 250;
  int l_bt3 = 20;
  std::uint64_t node_budget = 0;
  std::string variant = "g5";

  void attach(CLI::App* cmd) {
    cmd->add_option("--strategy", strategy, "Backtracking: bt1, bt2, bt3")->check(CLI::IsMember({"bt1", "bt2", "bt3"}));
    cmd->add_option("--order", order, "Branch order: fixed, random, gnn, gnn-fixed, gnn-random, fixed-reversed")
        ->check(CLI::IsMember({"fixed", "random", "gnn", "gnn-fixed", "gnn-random", "fixed-reversed"}));
    cmd->add_option("--model", model, "Weight file for the gnn orderings");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--timeout", timeout, "Wall-clock budget in seconds");
    cmd->add_option("--l-bt2", l_bt2, "BT2 initial depth budget");
    cmd->add_option("--l-bt2-step", l_bt2_step, "BT2 budget increment");
    cmd->add_option("--l-bt3", l_bt3, "BT3 initial deepening limit and increment");
    cmd->add_option("--node-budget", node_budget, "Give up after this many nodes (0 = unlimited)");
    cmd->add_option("--variant", variant, "Graph encoding used by the model: g1..g5");
  }

  SearchConfig config() const {
    SearchConfig cfg;
    cfg.backtrack = parse_backtrack(strategy);
    cfg.ordering = parse_ordering(order);
    cfg.seed = seed;
    cfg.timeout_seconds = timeout;
    cfg.l_bt2 = l_bt2;
    cfg.l_bt2_step = l_bt2_step;
    cfg.l_bt3 = l_bt3;
    cfg.node_budget = node_budget;
    cfg.variant = parse_graph_variant(variant);
    if (!model.empty()) cfg.model_path = model;
    cfg.validate();
    return cfg;
  }
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      auto listed = list_problem_files(in);
      files.insert(files.end(), listed.begin(), listed.end());
    } else {
      files.emplace_back(in);
    }
  }
  return files;
}

int run_solve(const std::string& path, const SolveFlags& flags, const std::string& trace_path,
              const std::string& stats_path) {
  const Problem problem = load_problem(path);
  const SearchConfig cfg = flags.config();
  std::optional<ModelWeights> model;
  if (needs_model(cfg.ordering)) {
    if (!cfg.model_path) throw ModelError("--order " + flags.order + " requires --model");
    model = load_weights(*cfg.model_path);
  }
  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw Error("cannot write " + trace_path);
  }
  const SearchResult r = solve(problem, cfg, model ? &*model : nullptr, trace_path.empty() ? nullptr : &trace);

  std::cout << to_string(r.status) << '\n';
  if (r.status == Status::Sat) std::cout << print_assignment(r.witness, problem.symbols);
  if (!stats_path.empty()) write_file(stats_path, stats_to_json(r).dump() + "\n");
  switch (r.status) {
    case Status::Sat: return kExitSat;
    case Status::Unsat: return kExitUnsat;
    case Status::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word equation solver with learned branch ordering"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Decide one problem file");
  std::string solve_path, trace_path, stats_path;
  SolveFlags solve_flags;
  solve_cmd->add_option("problem", solve_path, "Problem file")->required();
  solve_flags.attach(solve_cmd);
  solve_cmd->add_option("--trace", trace_path, "Write the rule-application trace here");
  solve_cmd->add_option("--stats", stats_path, "Write the statistics record here");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate benchmark problems");
  int benchmark = 1, count = 1;
  GenConfig gen;
  std::string gen_out = ".";
  gen_cmd->add_option("--benchmark", benchmark, "Benchmark family 1, 2 or 3")->check(CLI::Range(1, 3));
  gen_cmd->add_option("--seed", gen.seed, "Seed of the first instance; instance i uses seed + i");
  gen_cmd->add_option("--k", gen.max_len, "Maximum length of the base string");
  gen_cmd->add_option("--vars", gen.variables, "Variable pool size");
  gen_cmd->add_option("--letters", gen.letters, "Alphabet size");
  gen_cmd->add_option("--rounds", gen.rounds, "Replacement rounds");
  gen_cmd->add_option("--conjuncts", gen.conjuncts, "Equations per Benchmark-3 problem");
  gen_cmd->add_option("--n", gen.chain_length, "Benchmark-2 chain length");
  gen_cmd->add_option("--count", count, "Number of problems");
  gen_cmd->add_option("--out", gen_out, "Output directory");

  // collect-data
  auto* collect_cmd = app.add_subcommand("collect-data", "Extract labelled split points from SAT problems");
  std::vector<std::string> collect_inputs;
  std::string collect_variant = "g5", collect_out = "dataset";
  TreeLimits limits;
  collect_cmd->add_option("inputs", collect_inputs, "Problem files or directories")->required();
  collect_cmd->add_option("--variant", collect_variant, "Graph encoding g1..g5");
  collect_cmd->add_option("--depth", limits.depth_limit, "Proof-tree depth limit");
  collect_cmd->add_option("--node-cap", limits.node_cap, "Proof-tree node cap");
  collect_cmd->add_option("--out", collect_out, "Shard prefix; writes <out>.arity<n>.data");

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "Print the graph encoding of a problem");
  std::string encode_path, encode_variant = "g1";
  encode_cmd->add_option("problem", encode_path, "Problem file")->required();
  encode_cmd->add_option("--variant", encode_variant, "Graph encoding g1..g5");

  // tree
  auto* tree_cmd = app.add_subcommand("tree", "Dump the capped proof tree of a problem");
  std::string tree_path;
  TreeLimits tree_limits;
  tree_cmd->add_option("problem", tree_path, "Problem file")->required();
  tree_cmd->add_option("--depth", tree_limits.depth_limit, "Depth limit");
  tree_cmd->add_option("--node-cap", tree_limits.node_cap, "Node cap");

  // batch-eval
  auto* batch_cmd = app.add_subcommand("batch-eval", "Solve every *.eq file of a directory");
  std::string batch_dir, report_path;
  SolveFlags batch_flags;
  unsigned jobs = 1;
  bool no_timing = false;
  batch_cmd->add_option("dir", batch_dir, "Problem directory")->required();
  batch_flags.attach(batch_cmd);
  batch_cmd->add_option("--jobs", jobs, "Concurrent searches");
  batch_cmd->add_option("--report", report_path, "Write the report here instead of stdout");
  batch_cmd->add_flag("--no-timing", no_timing, "Omit wall-clock columns");

  // init-model
  auto* init_cmd = app.add_subcommand("init-model", "Write randomly initialised weights");
  std::size_t m = 128, steps = 2, hidden = 128;
  std::uint64_t init_seed = 0;
  std::string init_out;
  init_cmd->add_option("--m", m, "Embedding size");
  init_cmd->add_option("--T", steps, "Message-passing steps");
  init_cmd->add_option("--hidden", hidden, "Classifier hidden width");
  init_cmd->add_option("--seed", init_seed, "Seed");
  init_cmd->add_option("--out", init_out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return run_solve(solve_path, solve_flags, trace_path, stats_path);

    if (*gen_cmd) {
      fs::create_directories(gen_out);
      for (int i = 0; i < count; ++i) {
        GenConfig cfg = gen;
        cfg.seed = gen.seed + static_cast<std::uint64_t>(i);
        std::ostringstream stem;
        stem << 'b' << benchmark << '_' << std::setw(4) << std::setfill('0') << i;
        const fs::path base = fs::path(gen_out) / stem.str();
        if (benchmark == 1) {
          const auto g = gen_benchmark1(cfg);
          write_file(base.string() + ".eq", print_problem(g.problem));
          write_file(base.string() + ".witness", print_assignment(*g.witness, g.problem.symbols));
        } else {
          write_file(base.string() + ".eq", print_problem(benchmark == 2 ? gen_benchmark2(cfg) : gen_benchmark3(cfg)));
        }
      }
      return EXIT_SUCCESS;
    }

    if (*collect_cmd) {
      std::vector<NamedProblem> problems;
      for (const auto& f : expand_inputs(collect_inputs)) problems.push_back({f.filename().string(), load_problem(f)});
      const auto samples = collect_dataset(problems, parse_graph_variant(collect_variant), limits, &std::cerr);
      const auto paths = write_shards(samples, collect_out);
      std::cout << samples.size() << " samples from " << problems.size() << " problems\n";
      for (const auto& p : paths) std::cout << p << '\n';
      return EXIT_SUCCESS;
    }

    if (*encode_cmd) {
      const Problem p = load_problem(encode_path);
      std::cout << serialize_graph(encode_graph(p.formula, parse_graph_variant(encode_variant)), p.symbols) << '\n';
      return EXIT_SUCCESS;
    }

    if (*tree_cmd) {
      Problem p = load_problem(tree_path);
      const ProofTree tree = build_proof_tree(p.formula, p.symbols, tree_limits);
      std::cout << proof_tree_to_json(tree, p.symbols).dump() << '\n';
      return EXIT_SUCCESS;
    }

    if (*batch_cmd) {
      const SearchConfig cfg = batch_flags.config();
      std::optional<ModelWeights> model;
      if (needs_model(cfg.ordering)) {
        if (!cfg.model_path) throw ModelError("--order " + batch_flags.order + " requires --model");
        model = load_weights(*cfg.model_path);
      }
      const BatchReport report = batch_eval(batch_dir, cfg, model ? &*model : nullptr, jobs);
      const std::string text = format_report(report, !no_timing);
      if (report_path.empty()) {
        std::cout << text;
      } else {
        write_file(report_path, text);
      }
      return EXIT_SUCCESS;
    }

    if (*init_cmd) {
      save_weights(random_weights<float>(m, steps, hidden, init_seed), init_out);
      return EXIT_SUCCESS;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return EXIT_SUCCESS;
}
