#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "attk2/dyngraph.hpp"
#include "attk2/errors.hpp"
#include "attk2/generator.hpp"
#include "attk2/graph.hpp"
#include "attk2/io.hpp"
#include "attk2/query.hpp"

namespace attk2::cli {

namespace fs = std::filesystem;

namespace {

void print_sizes(std::ostream& out, const SizeReport& r) {
  out << "schema\t" << r.schema << "\n"
      << "data\t" << r.data << "\n"
      << "relations\t" << r.relations << "\n";
}

int cmd_build(const fs::path& input, const fs::path& output, unsigned k, std::ostream& out) {
  if (k < 2) throw InputError("--k must be at least 2");
  const AttK2Graph g = AttK2Graph::build(io::load_input(input), k);
  io::save_db(g, output);
  const fs::path dir = output.has_parent_path() ? output.parent_path() : fs::path(".");
  io::write_ids(g, dir / "ids.tsv");
  print_sizes(out, g.size_report());
  return 0;
}

std::vector<Query> read_script(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return parse_script(in);
  } catch (const InputError& e) {
    throw InputError(path.filename().string() + ": " + e.what());
  }
}

int cmd_query(const fs::path& db, const fs::path& script, bool dynamic, std::ostream& out) {
  const auto queries = read_script(script);
  const AttK2Graph g = io::load_db(db);
  std::vector<std::string> lines;
  if (dynamic) {
    const DynAttK2Graph d = DynAttK2Graph::from_input(g.export_input(), g.relations().base().k());
    lines = run_script(DynamicTarget(d), queries);
  } else {
    lines = run_script(StaticTarget(g), queries);
  }
  for (const auto& l : lines) out << l << '\n';
  return 0;
}

int cmd_gen(const GenParams& p, const fs::path& dir, std::ostream& out) {
  const Generated gen = generate(p);
  io::write_input(dir, gen.graph);
  fs::create_directories(dir / "queries");
  for (const QueryScript& s : gen.scripts) {
    std::string text;
    for (const auto& l : s.lines) text += l + '\n';
    io::write_file_atomic(dir / "queries" / (s.name + ".txt"), text);
  }
  out << "nodes\t" << gen.graph.nodes.size() << "\nedges\t" << gen.graph.edges.size() << "\nscripts\t"
      << gen.scripts.size() << "\n";
  return 0;
}

int cmd_bench(const fs::path& db, const fs::path& scripts, unsigned repeat, std::ostream& out) {
  if (repeat == 0) throw InputError("--repeat must be positive");
  const AttK2Graph g = io::load_db(db);
  const StaticTarget target(g);
  std::vector<fs::path> files;
  if (!fs::is_directory(scripts)) throw InputError("not a directory: " + scripts.string());
  for (const auto& entry : fs::directory_iterator(scripts)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  out << "set\tsamples\tmean_us\tmedian_us\tp99_us\tqps\n";
  out << std::fixed << std::setprecision(3);
  volatile std::size_t sink = 0;
  for (const fs::path& file : files) {
    const auto queries = read_script(file);
    std::vector<double> samples;
    samples.reserve(queries.size() * repeat);
    double total = 0;
    for (unsigned r = 0; r < repeat; ++r) {
      for (const Query& q : queries) {
        const auto t0 = std::chrono::steady_clock::now();
        sink = sink + execute(target, q).size();
        const auto t1 = std::chrono::steady_clock::now();
        const double us = std::chrono::duration<double, std::micro>(t1 - t0).count();
        samples.push_back(us);
        total += us;
      }
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    const double mean = n ? total / n : 0;
    const double median = n ? (n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2) : 0;
    const double p99 = n ? samples[std::min(n - 1, static_cast<std::size_t>(std::ceil(0.99 * n)) - 1)] : 0;
    const double qps = total > 0 ? n / (total / 1e6) : 0;
    out << file.stem().string() << '\t' << n << '\t' << mean << '\t' << median << '\t' << p99 << '\t' << qps << '\n';
  }
  return 0;
}

int cmd_stats(const fs::path& db, std::ostream& out) {
  const AttK2Graph g = io::load_db(db);
  const SizeReport r = g.size_report();
  print_sizes(out, r);
  out << "id_maps\t" << r.id_maps << "\n"
      << "total\t" << r.total() << "\n"
      << "nodes\t" << g.node_count() << "\n"
      << "edges\t" << g.edge_count() << "\n";
  const double bits = g.edge_count() ? 8.0 * static_cast<double>(r.relations) / g.edge_count() : 0.0;
  out << "relations_bits_per_edge\t" << std::fixed << std::setprecision(2) << bits << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compressed attributed multigraph store", "attk2"};
  app.require_subcommand(1);

  std::string input, output, db, script, scripts;
  unsigned k = 2, repeat = 1;
  bool dynamic = false;
  GenParams gen;

  auto* build = app.add_subcommand("build", "Build a store file from a TSV bundle");
  build->add_option("--input", input, "Bundle directory")->required();
  build->add_option("--output", output, "Store file to write")->required();
  build->add_option("--k", k, "Tree arity")->capture_default_str();

  auto* query = app.add_subcommand("query", "Run a query script");
  query->add_option("--db", db, "Store file")->required();
  query->add_option("--script", script, "Query script")->required();
  query->add_flag("--dynamic", dynamic, "Answer from a dynamic store rebuilt by insertion");

  auto* generate_cmd = app.add_subcommand("gen", "Generate a synthetic bundle and query scripts");
  generate_cmd->add_option("--nodes", gen.nodes)->capture_default_str();
  generate_cmd->add_option("--edges", gen.edges)->capture_default_str();
  generate_cmd->add_option("--node-types", gen.node_types)->capture_default_str();
  generate_cmd->add_option("--edge-types", gen.edge_types)->capture_default_str();
  generate_cmd->add_option("--attrs", gen.attrs)->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed)->capture_default_str();
  generate_cmd->add_option("--output", output, "Output directory")->required();

  auto* bench = app.add_subcommand("bench", "Time query scripts against a store");
  bench->add_option("--db", db, "Store file")->required();
  bench->add_option("--scripts", scripts, "Directory of *.txt scripts")->required();
  bench->add_option("--repeat", repeat, "Runs per script")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Report layer sizes");
  stats->add_option("--db", db, "Store file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*build) return cmd_build(input, output, k, out);
    if (*query) return cmd_query(db, script, dynamic, out);
    if (*generate_cmd) return cmd_gen(gen, output, out);
    if (*bench) return cmd_bench(db, scripts, repeat, out);
    if (*stats) return cmd_stats(db, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const CorruptFile& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NotFound& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace attk2::cli
