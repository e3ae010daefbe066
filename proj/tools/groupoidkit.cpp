#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "groupoidkit/bgr.hpp"
#include "groupoidkit/boundary.hpp"
#include "groupoidkit/error.hpp"
#include "groupoidkit/graph.hpp"
#include "groupoidkit/groupoid.hpp"
#include "groupoidkit/invariants.hpp"
#include "groupoidkit/moves.hpp"
#include "groupoidkit/stabilization.hpp"
#include "report.hpp"

namespace gk = groupoidkit;
using gk::cli::Json;
using gk::cli::Report;

namespace {

struct Options {
  std::size_t depth = 4;
  std::size_t stages = 3;
  std::size_t budget = 10000;
  std::string format = "text";
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gk::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

gk::GraphPtr load_graph(const std::string& arg) {
  if (auto g = gk::builtin_graph(arg)) return gk::share(std::move(*g));
  std::ifstream probe(arg);
  if (!probe) throw gk::ParseError(0, "'" + arg + "' is neither a builtin graph nor a readable file");
  return gk::share(gk::parse_graph(read_file(arg)));
}

std::vector<std::string> matrix_rows(const gk::IntegerMatrix& m) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string row;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) row += ' ';
      row += m(i, j).get_str();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json invariants_json(const gk::BowenFranks& bf) {
  Json factors = Json::array();
  for (const auto& d : bf.factors) factors.push_back(d.get_str());
  return {{"det", bf.determinant.get_str()},
          {"factors", factors},
          {"free_rank", bf.free_rank},
          {"cokernel", bf.group_string()}};
}

std::string factor_list(const gk::BowenFranks& bf) {
  std::string out = "[";
  for (std::size_t i = 0; i < bf.factors.size(); ++i) {
    if (i) out += ", ";
    out += bf.factors[i].get_str();
  }
  return out + "]";
}

Report cmd_invariants(const std::string& arg) {
  auto g = load_graph(arg);
  Report r{"invariants " + arg, {gk::serialize(*g)}, {}, {}, {}};
  auto a = gk::adjacency_matrix(*g);
  auto bf = gk::bowen_franks(*g);
  auto m = gk::bowen_franks_matrix(*g);
  auto snf = gk::smith_normal_form(m);
  r.lines.push_back("graph: " + g->name() + " (" + std::to_string(g->vertex_count()) +
                    " vertices, " + std::to_string(g->edge_count()) + " edges)");
  r.lines.push_back("adjacency matrix:");
  for (const auto& row : matrix_rows(a)) r.lines.push_back("  " + row);
  r.lines.push_back("det(1 - A^t) = " + bf.determinant.get_str());
  r.lines.push_back("invariant factors: " + factor_list(bf) + ", free rank " +
                    std::to_string(bf.free_rank));
  r.lines.push_back("coker(1 - A^t) = " + bf.group_string());
  r.lines.push_back(std::string("strongly connected: ") +
                    (gk::is_strongly_connected(*g) ? "yes" : "no"));
  r.result = {{"graph", g->name()},
              {"adjacency", matrix_rows(a)},
              {"strongly_connected", gk::is_strongly_connected(*g)}};
  r.result["bowen_franks"] = invariants_json(bf);
  r.check("U * (1 - A^t) * V = D", snf.U * m * snf.V == snf.D);
  return r;
}

Report cmd_compare(const std::string& a_arg, const std::string& b_arg,
                   std::optional<std::size_t> search) {
  auto a = load_graph(a_arg);
  auto b = load_graph(b_arg);
  Report r{"compare " + a_arg + " " + b_arg, {gk::serialize(*a), gk::serialize(*b)}, {}, {}, {}};
  if (search) r.command += " --search-moves " + std::to_string(*search);
  auto cert = gk::certify_distinct(*a, *b);
  r.result["first"] = invariants_json(cert.first);
  r.result["second"] = invariants_json(cert.second);
  r.result["notes"] = cert.notes;
  r.lines.push_back(a->name() + ": det " + cert.first.determinant.get_str() + ", coker " +
                    cert.first.group_string());
  r.lines.push_back(b->name() + ": det " + cert.second.determinant.get_str() + ", coker " +
                    cert.second.group_string());
  for (const auto& n : cert.notes) r.lines.push_back("note: " + n);
  if (cert.distinguished()) {
    r.result["verdict"] = "Distinguished";
    r.result["reason"] = cert.reason;
    r.lines.push_back("verdict: Distinguished (" + cert.reason + ")");
    return r;
  }
  std::optional<gk::MoveSequence> seq;
  std::string why;
  if (search) {
    gk::MoveSearchOptions so;
    so.budget = *search;
    auto found = gk::find_move_sequence(*a, *b, so);
    r.result["expansions"] = found.expansions;
    why = found.reason;
    if (found.found()) seq = found.sequence;
  } else if (gk::isomorphic(*a, *b)) {
    seq = gk::MoveSequence{};
    why = "graphs are isomorphic";
  } else {
    why = "no move search requested";
  }
  if (seq) {
    r.result["verdict"] = "MoveEquivalent";
    r.result["sequence"] = gk::serialize(*seq);
    r.lines.push_back("verdict: MoveEquivalent(" +
                      (seq->moves.empty() ? std::string("empty") :
                                            std::to_string(seq->moves.size()) + " moves") +
                      ")");
    for (const auto& m : seq->moves) r.lines.push_back("  " + gk::to_string(m));
    bool replays = true;
    std::string detail;
    try {
      gk::replay(*a, *seq, b.get());
    } catch (const gk::MoveError& e) {
      replays = false;
      detail = e.what();
    }
    r.check("sequence replays onto the second graph", replays, detail);
  } else {
    r.result["verdict"] = "Inconclusive";
    r.lines.push_back("verdict: Inconclusive (" + why + ")");
  }
  r.result["reason"] = why;
  return r;
}

Report cmd_bgr(const std::string& graph_arg, const std::string& k_text,
               const std::vector<std::string>& elements, std::size_t samples, const Options& opt,
               int& exit_code) {
  auto g = load_graph(graph_arg);
  Report r{"bgr " + graph_arg + " \"" + k_text + "\" --stages " + std::to_string(opt.stages),
           {gk::serialize(*g), k_text, std::to_string(opt.stages)}, {}, {}, {}};
  auto k = gk::parse_clopen(g, k_text);
  r.lines.push_back("K = " + gk::to_string(k.normalized()));
  auto full = gk::check_fullness(k);
  if (!full.full) {
    std::string w = gk::to_string(*full.witness);
    r.lines.push_back("NotFull: the orbit of " + w + " misses K");
    r.result["full"] = false;
    r.result["witness"] = w;
    r.check("K is full", false, w);
    exit_code = 3;
    return r;
  }
  r.check("K is full", true);
  gk::StagedUnitary y(k, std::max<std::size_t>(opt.stages, 16));
  y.ensure_rounds(opt.stages);
  r.lines.push_back("cover:");
  Json cover = Json::array();
  for (const auto& v : y.cover()) {
    r.lines.push_back("  " + gk::to_string(v));
    cover.push_back(gk::to_string(v));
  }
  std::istringstream dump(y.dump());
  Json stage_lines = Json::array();
  for (std::string line; std::getline(dump, line);) {
    r.lines.push_back(line);
    stage_lines.push_back(line);
  }
  r.result["full"] = true;
  r.result["cover"] = cover;
  r.result["stages"] = stage_lines;
  r.add_checks(y.check());
  gk::CornerIso iso(y);
  Json conj = Json::array();
  for (const auto& text : elements) {
    auto e = gk::parse_element(*g, text);
    auto f = iso.forward(e);
    r.lines.push_back("conjugate " + gk::to_string(e) + " = " + gk::to_string(f));
    conj.push_back({{"element", gk::to_string(e)}, {"image", gk::to_string(f)}});
    r.check("image of " + gk::to_string(e) + " lies in the corner",
            k.contains(f.x) && k.contains(f.y));
  }
  if (!conj.empty()) r.result["conjugates"] = conj;
  if (samples > 0) {
    r.command += " --samples " + std::to_string(samples) + " --seed " + std::to_string(opt.seed);
    r.add_checks(gk::check_conjugation(iso, samples, opt.seed));
  }
  return r;
}

Report cmd_stabilize(const std::string& arg, std::size_t depth) {
  auto g = load_graph(arg);
  Report r{"stabilize " + arg + " --check-depth " + std::to_string(depth),
           {gk::serialize(*g), std::to_string(depth)}, {}, {}, {}};
  gk::StabilizationIso iso(g, depth);
  const auto& w = *iso.window_ptr();
  r.lines.push_back("heads at every vertex; window of depth " + std::to_string(depth) + ": " +
                    std::to_string(w.vertex_count()) + " vertices, " +
                    std::to_string(w.edge_count()) + " edges");
  Json heads = Json::object();
  for (gk::VertexId v = 0; v < g->vertex_count(); ++v) {
    auto p = iso.head_path(v, depth);
    std::string chain = gk::to_string(w, p);
    r.lines.push_back("  head " + g->vertex_name(v) + ": " + chain);
    heads[g->vertex_name(v)] = chain;
  }
  auto rt = gk::check_round_trip(iso, depth);
  r.result = {{"window_vertices", w.vertex_count()},
              {"window_edges", w.edge_count()},
              {"heads", heads},
              {"atoms_checked", rt.atoms},
              {"elements_checked", rt.elements},
              {"failures", rt.failures}};
  r.lines.push_back("round trip: " + std::to_string(rt.atoms) + " atoms, " +
                    std::to_string(rt.elements) + " elements, " + std::to_string(rt.failures) +
                    " failures");
  r.check("backward(forward(.)) is the identity on atoms and elements", rt.ok(),
          rt.witness.value_or(""));
  return r;
}

Report cmd_move(const std::string& arg, const std::string& spec, const std::string& out_path) {
  auto g = load_graph(arg);
  Report r{"move " + arg + " \"" + spec + "\"", {gk::serialize(*g), spec}, {}, {}, {}};
  auto m = gk::parse_move_spec(spec);
  auto h = gk::apply_move(*g, m);
  gk::MoveSequence seq{{m}};
  auto before = gk::bowen_franks(*g);
  auto after = gk::bowen_franks(h);
  r.lines.push_back("move: " + gk::to_string(m));
  r.lines.push_back("result: " + std::to_string(h.vertex_count()) + " vertices, " +
                    std::to_string(h.edge_count()) + " edges");
  std::istringstream text(gk::serialize(h));
  for (std::string line; std::getline(text, line);) r.lines.push_back("  " + line);
  r.lines.push_back("det(1 - A^t): " + before.determinant.get_str() + " -> " +
                    after.determinant.get_str());
  r.lines.push_back("coker(1 - A^t): " + before.group_string() + " -> " + after.group_string());
  r.result = {{"move", gk::to_string(m)},
              {"sequence", gk::serialize(seq)},
              {"graph", gk::serialize(h)},
              {"before", invariants_json(before)},
              {"after", invariants_json(after)}};
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw gk::Error("cannot write '" + out_path + "'");
    out << gk::serialize(seq);
  }
  r.check("Bowen-Franks data unchanged", before == after,
          before == after ? "" : factor_list(before) + " vs " + factor_list(after));
  return r;
}

Report cmd_replay(const std::string& arg, const std::string& seq_path, const std::string& target) {
  auto g = load_graph(arg);
  auto text = read_file(seq_path);
  Report r{"replay " + arg + " " + seq_path, {gk::serialize(*g), text}, {}, {}, {}};
  auto seq = gk::parse_move_sequence(text);
  gk::GraphPtr t;
  if (!target.empty()) {
    t = load_graph(target);
    r.command += " --target " + target;
    r.inputs.push_back(gk::serialize(*t));
  }
  if (seq.has_inverse_moves() && !t) {
    throw gk::MoveError("the sequence contains inverse moves; pass --target");
  }
  bool met = true;
  std::string detail;
  gk::DirectedGraph end;
  try {
    end = gk::replay(*g, seq, t.get());
  } catch (const gk::MoveError& e) {
    met = false;
    detail = e.what();
  }
  r.lines.push_back("moves: " + std::to_string(seq.moves.size()));
  if (met) {
    r.lines.push_back("result: " + std::to_string(end.vertex_count()) + " vertices, " +
                      std::to_string(end.edge_count()) + " edges");
    std::istringstream body(gk::serialize(end));
    for (std::string line; std::getline(body, line);) r.lines.push_back("  " + line);
    r.result["graph"] = gk::serialize(end);
    r.check("Bowen-Franks data unchanged", gk::bowen_franks(*g) == gk::bowen_franks(end));
  }
  r.result["moves"] = seq.moves.size();
  if (t) {
    bool iso = met && gk::isomorphic(end, *t);
    r.check("sequence ends at the target up to isomorphism", iso, detail);
  } else if (!met) {
    r.check("sequence replays", false, detail);
  }
  return r;
}

Report cmd_selftest(const Options& opt) {
  Report r{"selftest --seed " + std::to_string(opt.seed), {std::to_string(opt.seed)}, {}, {}, {}};
  auto e2 = gk::share(*gk::builtin_graph("E2"));
  auto e2m = gk::share(*gk::builtin_graph("E2minus"));
  r.check("det(1 - A^t) = -1 for E2", gk::bowen_franks(*e2).determinant == -1);
  r.check("det(1 - A^t) = 1 for E2minus", gk::bowen_franks(*e2m).determinant == 1);
  r.check("det(1 - A^t) = 0 for a single loop",
          gk::bowen_franks(*gk::builtin_graph("single-loop")).determinant == 0);
  r.check("E2 and E2minus are distinguished", gk::certify_distinct(*e2, *e2m).distinguished());

  gk::StagedUnitary y(gk::parse_clopen(e2, "Z(a)"));
  y.ensure_rounds(3);
  bool stages_ok = true;
  for (const auto& c : y.check()) stages_ok = stages_ok && c.ok;
  r.check("staged unitary for (E2, Z(a)) over 3 rounds", stages_ok);
  gk::CornerIso iso(y);
  for (auto c : gk::check_conjugation(iso, 200, opt.seed)) {
    c.name += " (200 samples)";
    r.checks.push_back(std::move(c));
  }

  auto rt = gk::check_round_trip(gk::StabilizationIso(e2m, 2), 2);
  r.check("stabilization round trip for E2minus at depth 2", rt.ok(), rt.witness.value_or(""));

  auto m = gk::parse_move_spec("O v {a}|{b}");
  auto split = gk::apply_move(*e2, m);
  r.check("out-split of E2 has two vertices", split.vertex_count() == 2);
  r.check("out-split preserves Bowen-Franks data", gk::bowen_franks(split) == gk::bowen_franks(*e2));
  gk::MoveSequence seq{{m}};
  r.check("move sequences survive serialization",
          gk::parse_move_sequence(gk::serialize(seq)) == seq);

  auto two = gk::share(*gk::builtin_graph("two-loops"));
  r.check("Z(v) is not full in two-loops", !gk::is_full(*two, gk::parse_clopen(two, "Z(v)")));
  r.lines.push_back(std::to_string(r.checks.size()) + " self checks");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph groupoids, stabilization, graph moves and Bowen-Franks invariants"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--depth", opt.depth, "oracle depth")->capture_default_str();
  app.add_option("--stages", opt.stages, "rounds of the staged unitary")->capture_default_str();
  app.add_option("--budget", opt.budget, "move search expansions")->capture_default_str();
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "seed for sampled checks (GROUPOIDKIT_SEED overrides)")
      ->capture_default_str();

  std::string graph, graph2, text, file;
  std::optional<std::size_t> search;
  std::optional<std::size_t> check_depth;
  std::vector<std::string> elements;
  std::size_t samples = 0;
  std::string out_path, target;

  auto* inv = app.add_subcommand("invariants", "adjacency matrix, det(1 - A^t) and coker(1 - A^t)");
  inv->add_option("graph", graph, "builtin name or graph file")->required();

  auto* cmp = app.add_subcommand("compare", "try to distinguish two graphs or relate them by moves");
  cmp->add_option("first", graph, "builtin name or graph file")->required();
  cmp->add_option("second", graph2, "builtin name or graph file")->required();
  std::vector<std::size_t> search_values;
  auto* search_opt =
      cmp->add_option("--search-moves", search_values,
                      "search for a move sequence with this budget (default --budget)")
          ->expected(0, 1);

  auto* bgr = app.add_subcommand("bgr", "staged unitary for a full clopen set K");
  bgr->add_option("graph", graph, "builtin name or graph file")->required();
  bgr->add_option("K", text, "clopen set, e.g. \"Z(a)\"")->required();
  bgr->add_option("--conjugate", elements, "element (x, k, y)@(i,j) to conjugate into the corner");
  bgr->add_option("--samples", samples, "random composable pairs for the conjugation check");

  auto* stab = app.add_subcommand("stabilize", "head structure and round-trip checks");
  stab->add_option("graph", graph, "builtin name or graph file")->required();
  stab->add_option("--check-depth", check_depth, "atom depth (defaults to --depth)");

  auto* mv = app.add_subcommand("move", "apply one move, e.g. \"O v {a}|{b}\"");
  mv->add_option("graph", graph, "builtin name or graph file")->required();
  mv->add_option("move", text, "move specification")->required();
  mv->add_option("-o,--out", out_path, "write the move sequence to this file");

  auto* rp = app.add_subcommand("replay", "replay a move sequence file");
  rp->add_option("graph", graph, "builtin name or graph file")->required();
  rp->add_option("sequence", file, "move sequence file")->required();
  rp->add_option("--target", target, "graph the sequence should end at");

  auto* dot = app.add_subcommand("export-dot", "write the graph in DOT");
  dot->add_option("graph", graph, "builtin name or graph file")->required();
  dot->add_option("-o,--out", out_path, "output file (default stdout)");

  auto* self = app.add_subcommand("selftest", "run the built-in checks");

  CLI11_PARSE(app, argc, argv);
  if (search_opt->count() > 0) search = search_values.empty() ? opt.budget : search_values.front();
  if (const char* env = std::getenv("GROUPOIDKIT_SEED")) {
    try {
      opt.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: GROUPOIDKIT_SEED is not a number\n";
      return 2;
    }
  }

  try {
    if (dot->parsed()) {
      auto g = load_graph(graph);
      auto body = gk::to_dot(*g);
      if (out_path.empty()) {
        std::cout << body;
      } else {
        std::ofstream out(out_path);
        if (!out) throw gk::Error("cannot write '" + out_path + "'");
        out << body;
      }
      return 0;
    }
    int exit_code = 0;
    Report r;
    if (inv->parsed()) {
      r = cmd_invariants(graph);
    } else if (cmp->parsed()) {
      r = cmd_compare(graph, graph2, search);
    } else if (bgr->parsed()) {
      r = cmd_bgr(graph, text, elements, samples, opt, exit_code);
    } else if (stab->parsed()) {
      r = cmd_stabilize(graph, check_depth.value_or(opt.depth));
    } else if (mv->parsed()) {
      r = cmd_move(graph, text, out_path);
    } else if (rp->parsed()) {
      r = cmd_replay(graph, file, target);
    } else if (self->parsed()) {
      r = cmd_selftest(opt);
    }
    if (opt.format == "json") {
      gk::cli::print_json(std::cout, r);
    } else {
      gk::cli::print_text(std::cout, r);
    }
    if (exit_code != 0) return exit_code;
    return r.ok() ? 0 : 1;
  } catch (const gk::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
