// Copyright 2026 The cfrmat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "cfrmat/builtin_games.h"
#include "cfrmat/compiler.h"
#include "cfrmat/oracle.h"
#include "cfrmat/solver.h"

namespace cfrmat::cli {
namespace {

// A compiled game plus the tree used for exploitability.
struct LoadedGame {
  CompiledGame cg;
  GameTree tree;
  double setup_ms = 0.0;
};

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string Fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return buf;
}

// Shortest text that reads back to the same double.
std::string Shortest(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

LoadedGame Load(const std::string& source) {
  LoadedGame g;
  if (EndsWith(source, ".cfrm")) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw InputError("cannot open compiled game '" + source + "'");
    try {
      g.cg = ReadCompiled(in);
      g.tree = Decompile(g.cg);
    } catch (const ContainerError& e) {
      throw InputError("cannot read compiled game '" + source + "': " + e.what());
    } catch (const GameError& e) {
      throw InputError("compiled game '" + source + "' is inconsistent: " + e.what());
    }
    return g;
  }
  g.tree = LoadGame(source);
  CompileStats stats;
  try {
    g.cg = Compile(g.tree, &stats);
  } catch (const GameError& e) {
    throw InputError(e.what());
  }
  g.setup_ms = stats.seconds * 1e3;
  return g;
}

std::string SparsityText(const CsrMatrix<double>& m) {
  if (m.num_rows == 0 || m.num_cols == 0) return "n/a";
  return Fixed(100.0 * Sparsity(m), 1);
}

void PrintSummary(const CompiledGame& cg, std::ostream& out) {
  const GameDims& d = cg.dims;
  out << "game: " << cg.name << "\n";
  out << "nodes " << d.num_nodes << "  terminals " << d.num_terminals << "  decisions "
      << d.num_decisions << "  infosets " << d.num_infosets << "  pairs " << d.num_pairs
      << "  players " << d.num_players << "  depth " << d.depth << "\n";
  const std::string levels = cg.levels.empty() || d.num_nodes == 0
                                 ? "n/a"
                                 : Fixed(100.0 * MeanLevelSparsity(cg), 1);
  out << "sparsity %: M_QV " << SparsityText(cg.m_qv) << " / M_HQ " << SparsityText(cg.m_hq)
      << " / L(avg) " << levels << " / G " << SparsityText(cg.g) << "\n";
}

struct CompileOptions {
  std::string game;
  std::string output;
};

int CmdCompile(const CompileOptions& o, std::ostream& out) {
  LoadedGame g = Load(o.game);
  PrintSummary(g.cg, out);
  out << "setup_ms " << Fixed(g.setup_ms, 3) << "\n";
  std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot open output '" + o.output + "'");
  const auto bytes = WriteCompiled(g.cg, file);
  file.close();
  if (!file) throw InputError("failed writing '" + o.output + "'");
  out << "wrote " << bytes << " bytes to " << o.output << "\n";
  return kExitOk;
}

int CmdInfo(const std::string& path, std::ostream& out) {
  LoadedGame g = Load(path);
  PrintSummary(g.cg, out);
  return kExitOk;
}

struct SolveOptions {
  std::string input;
  std::string game;
  Index iterations = 0;
  std::string precision = "f64";
  Index report_every = 0;
  std::string metrics;
  std::string strategy;
};

void WriteStrategy(const std::vector<StrategyRecord>& records, const std::string& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw InputError("cannot open strategy output '" + path + "'");
  file << kStrategyHeader << "\n";
  for (const auto& r : records)
    file << r.player << "," << CsvField(r.infoset) << "," << CsvField(r.action) << ","
         << FormatReal(r.probability) << "\n";
}

template <typename Real>
int RunSolve(const SolveOptions& o, const LoadedGame& g, std::ostream& out, std::ostream& err) {
  const SolverGame<Real> game(g.cg);
  SolverState<Real> state = InitState(game);
  SweepBuffers<Real> buffers(game.dims);

  std::unique_ptr<std::ofstream> metrics;
  if (!o.metrics.empty()) {
    metrics = std::make_unique<std::ofstream>(o.metrics, std::ios::trunc);
    if (!*metrics) throw InputError("cannot open metrics output '" + o.metrics + "'");
    *metrics << kMetricsHeader << "\n";
  }

  double total_ms = 0.0;
  std::optional<double> last_exploitability;
  std::optional<double> last_nash_conv;
  for (Index t = 1; t <= o.iterations; ++t) {
    MetricsRecord record;
    try {
      record = Iterate(game, state, buffers);
    } catch (const NumericalFault& e) {
      if (metrics) metrics->flush();
      err << "numerical fault at iteration " << t << ": " << e.what() << "\n";
      return kExitNumerical;
    }
    total_ms += record.wall_ms;
    const bool checkpoint = (o.report_every > 0 && t % o.report_every == 0) || t == o.iterations;
    if (checkpoint) {
      const std::vector<double> avg(state.avg_sigma.begin(), state.avg_sigma.end());
      const FullStrategy fs = StrategyFromPairs(g.tree, g.cg.maps, avg);
      record.nash_conv = NashConv(g.tree, fs);
      record.exploitability = *record.nash_conv / static_cast<double>(g.tree.num_players);
      last_nash_conv = record.nash_conv;
      last_exploitability = record.exploitability;
    }
    if (metrics) {
      *metrics << record.iteration << "," << Shortest(record.wall_ms) << ","
               << (record.exploitability ? Shortest(*record.exploitability) : "") << ","
               << (record.nash_conv ? Shortest(*record.nash_conv) : "") << "\n";
    }
  }
  if (!o.strategy.empty()) WriteStrategy(AverageStrategy(g.cg, state), o.strategy);

  out << "game: " << g.cg.name << "\n";
  out << "iterations " << state.iteration << "  precision " << o.precision << "  mean_ms "
      << Fixed(total_ms / static_cast<double>(o.iterations), 4) << "\n";
  if (last_exploitability)
    out << "exploitability " << FormatReal(*last_exploitability) << "  nash_conv "
        << FormatReal(*last_nash_conv) << "\n";
  return kExitOk;
}

int CmdSolve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  if (o.iterations < 1) {
    err << "solve: --iterations must be at least 1\n";
    return kExitUsage;
  }
  if (o.input.empty() == o.game.empty()) {
    err << "solve: give exactly one of a compiled input file or --game\n";
    return kExitUsage;
  }
  const LoadedGame g = Load(o.input.empty() ? o.game : o.input);
  return o.precision == "f32" ? RunSolve<float>(o, g, out, err) : RunSolve<double>(o, g, out, err);
}

struct BenchOptions {
  std::vector<std::string> games;
  Index iterations = 100;
  Index repetitions = 5;
  std::string output;
};

struct MeanSem {
  double mean = 0.0;
  std::optional<double> sem;
};

MeanSem Summarize(const std::vector<double>& xs) {
  MeanSem m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sem = std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
            std::sqrt(static_cast<double>(xs.size()));
  }
  return m;
}

int CmdBench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  if (o.iterations < 1 || o.repetitions < 1) {
    err << "bench: --iterations and --repetitions must be at least 1\n";
    return kExitUsage;
  }
  std::unique_ptr<std::ofstream> file;
  if (!o.output.empty()) {
    file = std::make_unique<std::ofstream>(o.output, std::ios::trunc);
    if (!*file) throw InputError("cannot open bench output '" + o.output + "'");
  }
  std::ostream& csv = file ? *file : out;
  csv << kBenchHeader << "\n";
  for (const std::string& source : o.games) {
    const LoadedGame g = Load(source);
    const SolverGame<double> game(g.cg);
    std::vector<double> matrix_ms, recursive_ms;
    for (Index rep = 0; rep < o.repetitions; ++rep) {
      SolverState<double> state = InitState(game);
      SweepBuffers<double> buffers(game.dims);
      const auto start = std::chrono::steady_clock::now();
      for (Index t = 0; t < o.iterations; ++t) Iterate(game, state, buffers);
      const auto mid = std::chrono::steady_clock::now();
      RecursiveCfr cfr(g.tree);
      for (Index t = 0; t < o.iterations; ++t) cfr.Iterate();
      const auto end = std::chrono::steady_clock::now();
      const double n = static_cast<double>(o.iterations);
      matrix_ms.push_back(std::chrono::duration<double, std::milli>(mid - start).count() / n);
      recursive_ms.push_back(std::chrono::duration<double, std::milli>(end - mid).count() / n);
    }
    const MeanSem matrix = Summarize(matrix_ms);
    const MeanSem recursive = Summarize(recursive_ms);
    for (const auto& [impl, m] : {std::pair{"matrix", matrix}, std::pair{"recursive", recursive}})
      csv << CsvField(g.cg.name) << "," << g.cg.dims.num_nodes << "," << g.cg.dims.num_infosets
          << "," << impl << "," << Shortest(m.mean) << "," << (m.sem ? Shortest(*m.sem) : "")
          << "\n";
    err << "# " << g.cg.name << ": matrix/recursive mean ratio "
        << Fixed(matrix.mean / recursive.mean, 3) << "\n";
  }
  return kExitOk;
}

}  // namespace

GameTree LoadGame(const std::string& source) {
  if (IsBuiltinGameName(source)) {
    try {
      return BuiltinGame(source);
    } catch (const std::invalid_argument& e) {
      throw InputError("bad builtin game '" + source + "': " + e.what());
    }
  }
  std::ifstream in(source);
  if (!in) throw InputError("cannot open game file '" + source + "'");
  std::stringstream text;
  text << in.rdbuf();
  try {
    return ParseGameText(text.str());
  } catch (const GameTextError& e) {
    throw InputError(source + ":" + e.what());
  } catch (const GameError& e) {
    throw InputError(source + ": " + e.what());
  }
}

std::string FormatReal(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, end);
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual regret minimization as sparse matrix operations", "cfrmat"};
  app.require_subcommand(1);

  CompileOptions compile_opts;
  auto* compile = app.add_subcommand("compile", "Compile a game to a container file");
  compile->add_option("--game,game", compile_opts.game, "Builtin name or game-text path")
      ->required();
  compile->add_option("-o,--output", compile_opts.output, "Container output path")->required();

  SolveOptions solve_opts;
  bool solve_gpu = false;
  auto* solve = app.add_subcommand("solve", "Run CFR and report metrics");
  solve->add_option("input", solve_opts.input, "Compiled container (.cfrm)");
  solve->add_option("--game", solve_opts.game, "Builtin name or game-text path");
  solve->add_option("-n,--iterations", solve_opts.iterations, "Number of iterations")->required();
  solve->add_option("--precision", solve_opts.precision, "Working precision")
      ->check(CLI::IsMember({"f64", "f32"}));
  solve->add_option("--report-every", solve_opts.report_every,
                    "Exploitability checkpoint interval (0: final iteration only)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--metrics", solve_opts.metrics, "Metrics CSV output path");
  solve->add_option("--strategy", solve_opts.strategy, "Average strategy CSV output path");
  solve->add_flag("--gpu", solve_gpu, "Reserved; not supported");

  BenchOptions bench_opts;
  bool bench_gpu = false;
  auto* bench = app.add_subcommand("bench", "Time matrix and recursive CFR iterations");
  bench->add_option("--game,game", bench_opts.games, "Games to benchmark")->required();
  bench->add_option("-n,--iterations", bench_opts.iterations, "Iterations per repetition");
  bench->add_option("-r,--repetitions", bench_opts.repetitions, "Repetitions per game");
  bench->add_option("-o,--output", bench_opts.output, "CSV output path (default stdout)");
  bench->add_flag("--gpu", bench_gpu, "Reserved; not supported");

  std::string info_path;
  auto* info = app.add_subcommand("info", "Print dimensions and sparsities of a container");
  info->add_option("input", info_path, "Compiled container (.cfrm)")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cfrmat: " << e.what() << "\n";
    return kExitUsage;
  }

  if (solve_gpu || bench_gpu) {
    err << "cfrmat: --gpu is not supported by this build; GPU dispatch is not implemented\n";
    return kExitUsage;
  }
  try {
    if (compile->parsed()) return CmdCompile(compile_opts, out);
    if (solve->parsed()) return CmdSolve(solve_opts, out, err);
    if (bench->parsed()) return CmdBench(bench_opts, out, err);
    return CmdInfo(info_path, out);
  } catch (const InputError& e) {
    err << "cfrmat: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalFault& e) {
    err << "cfrmat: numerical fault: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace cfrmat::cli
