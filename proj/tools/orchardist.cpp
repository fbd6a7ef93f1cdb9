// Command-line front end. Exit codes: 0 ok, 2 input error, 3 timeout,
// 4 generation failure, 130 interrupted.

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "orchardist/orchardist.hpp"

namespace fs = std::filesystem;
using namespace orchardist;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kTimeout = 3;
constexpr int kGenerationFailure = 4;
constexpr int kInterrupted = 130;

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !(out.flush())) {
    throw InputError("cannot write " + path.string());
  }
}

PhyloNetwork load(const std::string& path, const std::string& format) {
  const std::string text = read_file(path);
  NetworkFormat f = sniff_format(text);
  if (format == "enewick") f = NetworkFormat::kENewick;
  if (format == "edges") f = NetworkFormat::kEdgeList;
  return parse_network(text, f);
}

double since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Json names_json(const std::vector<std::string>& names, const std::vector<VertexId>& vs) {
  Json list = Json::array();
  for (VertexId v : vs) list.push_back(names[index(v)]);
  return list;
}

int cmd_check(const std::string& path, const std::string& format) {
  const auto start = std::chrono::steady_clock::now();
  const PhyloNetwork net = load(path, format);
  const double parsed = since(start);
  const auto names = output_names(net);
  const auto omni = omnians(net);
  const auto zz = zigzag_decompose(net);
  Json fences = Json::array();
  for (const auto& t : zz.trails) {
    if (t.kind != TrailKind::kWFence) continue;
    Json arcs = Json::array();
    for (ArcId a : t.arcs) arcs.push_back({names[index(net.tail(a))], names[index(net.head(a))]});
    fences.push_back(arcs);
  }
  Json doc;
  doc["leaves"] = net.num_leaves();
  doc["reticulations"] = net.num_reticulations();
  doc["is_tree_child"] = omni.empty();
  doc["is_orchard"] = is_orchard(net).orchard;
  doc["is_tree_based"] = fences.empty();
  doc["l_tc"] = omni.size();
  doc["l_tb"] = fences.size();
  doc["omnians"] = names_json(names, omni);
  doc["w_fences"] = fences;
  doc["timings"] = {{"parse", parsed}, {"total", since(start)}};
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

struct DistanceArgs {
  std::string path;
  std::string format = "auto";
  std::string cls = "or";
  std::string method = "bnb";
  double timeout = 3600.0;
  bool emit_additions = false;
  bool emit_labelling = false;
  bool check = false;
};

int cmd_distance(const DistanceArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const PhyloNetwork net = load(a.path, a.format);
  const double parsed = since(start);
  Json doc;
  int code = kOk;
  const auto names = output_names(net);
  auto named_arcs = [&](const std::vector<ArcId>& arcs) {
    return additions_json(net, with_fresh_labels(net, arcs));
  };
  if (a.cls == "tc") {
    doc["l_tc"] = l_tc(net);
    if (a.emit_additions) doc["additions"] = named_arcs(tc_additions(net));
    if (a.check) {
      auto arcs = tc_additions(net);
      doc["check"] = is_tree_child(add_leaves(net, with_fresh_labels(net, arcs)));
    }
  } else if (a.cls == "tb") {
    doc["l_tb"] = l_tb(net);
    if (a.emit_additions) doc["additions"] = named_arcs(tb_additions(net));
    if (a.check) {
      auto arcs = tb_additions(net);
      doc["check"] = is_tree_based(add_leaves(net, with_fresh_labels(net, arcs)));
    }
  } else if (a.method == "brute") {
    std::optional<std::size_t> k;
    try {
      k = brute_force_oracle(net);
    } catch (const SolverError& e) {
      throw InputError(e.what());
    }
    doc["l_or"] = *k;
    doc["method"] = "brute";
    doc["optimal"] = true;
  } else {
    SolveOptions options;
    options.timeout_seconds = a.timeout;
    options.cancel = &g_interrupted;
    const SolveResult result = solve_bnb(net, options);
    doc["l_or"] = result.l_or;
    doc["method"] = "bnb";
    doc["optimal"] = result.optimal;
    doc["lower_bound"] = result.lower_bound;
    doc["nodes"] = result.stats.nodes;
    if (a.emit_additions) doc["additions"] = additions_json(net, result.additions);
    if (a.emit_labelling) doc["labelling"] = labelling_json(net, result.labelling);
    if (a.check) {
      const Certificate cert = extract_additions(net, result);
      doc["check"] = cert.proof.orchard;
    }
    if (!result.optimal) code = g_interrupted ? kInterrupted : kTimeout;
  }
  doc["timings"] = {{"parse", parsed}, {"total", since(start)}};
  if (auto bad = report_violation(doc)) throw std::logic_error("report schema: " + *bad);
  std::cout << doc.dump(2) << "\n";
  return code;
}

int cmd_export_milp(const std::string& path, const std::string& format, const std::string& out) {
  const PhyloNetwork net = load(path, format);
  const std::string lp = write_lp(build_milp(net));
  if (out.empty() || out == "-") {
    std::cout << lp;
  } else {
    write_file(out, lp);
  }
  return kOk;
}

Json manifest_line(const std::string& file, const PhyloNetwork& net) {
  return {{"file", file}, {"leaves", net.num_leaves()}, {"reticulations", net.num_reticulations()}};
}

int cmd_generate(std::size_t leaves, std::size_t retics, std::size_t count, std::uint64_t seed,
                 const std::string& out, std::optional<double> nu) {
  fs::create_directories(out);
  std::string manifest;
  for (std::size_t i = 0; i < count; ++i) {
    GenConfig config;
    config.leaves = leaves;
    config.reticulations = retics;
    config.seed = seed + i;
    config.nu = nu;
    const Generated g = generate(config);
    char name[64];
    std::snprintf(name, sizeof name, "net_%04zu.enewick", i + 1);
    write_file(fs::path(out) / name, serialize_enewick(g.network) + "\n");
    Json line = manifest_line(name, g.network);
    line["seed"] = config.seed;
    line["nu"] = g.nu;
    line["attempts"] = g.attempts;
    manifest += line.dump() + "\n";
  }
  write_file(fs::path(out) / "manifest.jsonl", manifest);
  return kOk;
}

int cmd_reduce_vc(const std::string& path, const std::string& out) {
  const CubicGraph g = parse_cubic_graph(read_file(path));
  const PhyloNetwork net = reduce_vertex_cover(g);
  const std::string text = serialize_enewick(net) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return kOk;
  }
  fs::create_directories(out);
  write_file(fs::path(out) / "reduction.enewick", text);
  Json line = manifest_line("reduction.enewick", net);
  line["graph"] = path;
  line["graph_vertices"] = g.vertices.size();
  write_file(fs::path(out) / "manifest.jsonl", line.dump() + "\n");
  return kOk;
}

int cmd_bench(const std::string& grid_text, std::size_t per_cell, double timeout,
              std::uint64_t seed, const std::string& csv) {
  std::vector<GridCell> grid;
  try {
    grid = parse_grid(grid_text);
  } catch (const GenerationError& e) {
    throw InputError(e.what());
  }
  BenchOptions options;
  options.per_cell = per_cell;
  options.timeout_seconds = timeout;
  options.seed = seed;
  options.cancel = &g_interrupted;
  const auto records = run_bench(grid, options);
  const std::string table = bench_csv(records);
  const std::string summary = summary_table(summarize(grid, records));
  if (csv.empty() || csv == "-") {
    std::cout << table;
    std::cerr << summary;
  } else {
    write_file(csv, table);
    std::cout << summary;
  }
  return g_interrupted ? kInterrupted : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_sigint);
  CLI::App app{"Leaf-addition distances of phylogenetic networks to the tree-child, "
               "orchard and tree-based classes"};
  app.require_subcommand(1);
  std::string format = "auto";
  const auto formats = CLI::IsMember({"auto", "enewick", "edges"});

  std::string check_path;
  auto* check = app.add_subcommand("check", "class membership and polynomial distances");
  check->add_option("path", check_path, "network file")->required();
  check->add_option("--format", format)->check(formats);

  DistanceArgs dist;
  auto* distance = app.add_subcommand("distance", "distance to one class");
  distance->add_option("path", dist.path, "network file")->required();
  distance->add_option("--format", dist.format)->check(formats);
  distance->add_option("--class", dist.cls)->check(CLI::IsMember({"tc", "tb", "or"}));
  distance->add_option("--method", dist.method)->check(CLI::IsMember({"bnb", "brute"}));
  distance->add_option("--timeout", dist.timeout, "seconds");
  distance->add_flag("--emit-additions", dist.emit_additions);
  distance->add_flag("--emit-labelling", dist.emit_labelling);
  distance->add_flag("--check", dist.check, "re-verify the certificate");

  std::string milp_path, milp_out;
  auto* milp = app.add_subcommand("export-milp", "write the MILP model in LP format");
  milp->add_option("path", milp_path, "network file")->required();
  milp->add_option("--format", format)->check(formats);
  milp->add_option("-o,--out", milp_out, "LP file (default stdout)");

  std::size_t leaves = 20, retics = 5, count = 1;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::optional<double> nu;
  auto* gen = app.add_subcommand("generate", "birth-hybridization networks");
  gen->add_option("--leaves", leaves)->required();
  gen->add_option("--retics", retics)->required();
  gen->add_option("--count", count);
  gen->add_option("--seed", seed);
  gen->add_option("--nu", nu, "fixed hybridization rate");
  gen->add_option("--out", out_dir)->required();

  std::string graph_path, vc_out;
  auto* vc = app.add_subcommand("reduce-vc", "network of the vertex-cover reduction");
  vc->add_option("graph", graph_path, "cubic graph edge list")->required();
  vc->add_option("--out", vc_out, "output directory (default: eNewick on stdout)");

  std::string grid, csv;
  std::size_t per_cell = 50;
  double bench_timeout = 3600.0;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "solve generated instances over a grid");
  bench->add_option("--grid", grid, "cells like 20x5,50x10")->required();
  bench->add_option("--per-cell", per_cell);
  bench->add_option("--timeout", bench_timeout, "seconds per instance");
  bench->add_option("--seed", bench_seed);
  bench->add_option("--csv", csv, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*check) return cmd_check(check_path, format);
    if (*distance) return cmd_distance(dist);
    if (*milp) return cmd_export_milp(milp_path, format, milp_out);
    if (*gen) return cmd_generate(leaves, retics, count, seed, out_dir, nu);
    if (*vc) return cmd_reduce_vc(graph_path, vc_out);
    if (*bench) return cmd_bench(grid, per_cell, bench_timeout, bench_seed, csv);
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.reason() == GenerationError::Reason::kNotCubic ||
        e.reason() == GenerationError::Reason::kBadConfig) {
      return kInputError;
    }
    return kGenerationFailure;
  } catch (const ValidationError& e) {
    std::cerr << "error: invalid network: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
