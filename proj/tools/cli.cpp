#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "lfends/endsum.hpp"
#include "lfends/error.hpp"
#include "lfends/h0.hpp"

namespace lfends::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string family;
  std::string params;
  std::string graph;
  int depth = 4;
  std::optional<int> window;
  std::string end;
  std::string ray;
  std::string tower;
  std::string out;
  std::string coeff = "z";
  bool basis = false;
  bool reduced = false;
  std::string left;
  std::string right;

  int window_radius() const { return window ? *window : depth + 2; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw UsageError("cannot write " + o.out);
  file << text;
}

GraphGenerator named_family(const std::string& name, const std::string& params_text) {
  const std::string base = name.substr(0, name.find('('));
  const auto names = GraphGenerator::family_names();
  if (std::find(names.begin(), names.end(), base) == names.end()) throw UsageError("unknown family '" + name + "'");
  std::map<std::string, std::string> params;
  std::stringstream list(params_text);
  for (std::string item; std::getline(list, item, ',');) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--params expects k=v pairs, got '" + item + "'");
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  try {
    return GraphGenerator::from_name(name, params);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw UsageError(e.what());
    throw;
  }
}

GraphGenerator graph_of(const Options& o) {
  if (!o.graph.empty() && !o.family.empty()) throw UsageError("give either --family or --graph, not both");
  if (!o.graph.empty()) return parse_edge_list(read_file(o.graph));
  if (o.family.empty()) throw UsageError("a graph source is required: --family or --graph");
  return named_family(o.family, o.params);
}

Coefficients coefficients_of(const Options& o) {
  if (o.coeff == "z") return Coefficients::integers();
  if (o.coeff.rfind("fp:", 0) == 0) {
    const auto p = o.coeff.substr(3);
    if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos) throw UsageError("bad --coeff " + o.coeff);
    try {
      return Coefficients::prime_field(std::stoull(p));
    } catch (const Error& e) {
      throw UsageError(e.what());
    } catch (const std::out_of_range&) {
      throw UsageError("bad --coeff " + o.coeff);
    }
  }
  throw UsageError("--coeff must be z or fp:<p>");
}

struct GraphTower {
  GraphGenerator gen;
  std::shared_ptr<const Ball> window;
  Exhaustion exh;
  EndTower tower;
};

GraphTower graph_tower(const Options& o) {
  auto gen = graph_of(o);
  auto window = std::make_shared<const Ball>(materialize_ball(gen, o.window_radius()));
  auto exh = efficient_exhaustion(window, o.depth);
  auto tower = build_tower(exh);
  return GraphTower{std::move(gen), std::move(window), std::move(exh), std::move(tower)};
}

EndTower any_tower(const Options& o) {
  if (!o.tower.empty()) {
    if (!o.family.empty() || !o.graph.empty()) throw UsageError("give either --tower or a graph source");
    return read_tower(read_file(o.tower));
  }
  return graph_tower(o).tower;
}

EndPrefix thread_of(const Options& o, const EndTower& t) {
  if (o.end.empty()) {
    if (t.depth() == 0 || t.size(t.depth() - 1) == 0) fail(ErrorKind::EmptyTower, "tower has no ends");
    return prefix_of(t, t.depth() - 1, 0);
  }
  EndPrefix p;
  std::stringstream list(o.end);
  for (std::string item; std::getline(list, item, ',');) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("--end expects a comma list of indices, got '" + o.end + "'");
    }
    p.thread.push_back(std::stoul(item));
  }
  if (p.depth() != t.depth()) {
    fail(ErrorKind::DepthMismatch, "--end has " + std::to_string(p.depth()) + " entries but the tower has depth " +
                                       std::to_string(t.depth()));
  }
  if (!is_coherent(t, p)) fail(ErrorKind::IncoherentPrefix, "--end " + o.end + " is not a thread of bonds");
  return p;
}

std::string join(const std::vector<std::size_t>& xs, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + std::to_string(xs[i]);
  return s;
}

std::string join_ids(const std::vector<VertexId>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + std::to_string(xs[i]);
  return s;
}

std::string tower_report(const EndTower& t) {
  std::ostringstream s;
  const auto report = ends_report(t);
  s << "level  size\n";
  for (std::size_t l = 0; l < t.depth(); ++l) s << l + 1 << "  " << t.size(l) << "\n";
  s << "sizes " << join(report.sizes) << "\n";
  s << "surjective " << (t.surjective() ? "yes" : "no") << "\n";
  s << (report.stabilized ? "stabilized " + std::to_string(*report.stabilized_count) + " ends" : "not stabilized")
    << "\n";
  s << "code " << canonical_code(t) << "\n";
  return s.str();
}

std::ostringstream header(const Options& o, const std::string& verb) {
  std::ostringstream s;
  s << verb;
  if (!o.family.empty()) s << " family " << o.family;
  if (!o.graph.empty()) s << " graph " << o.graph;
  if (!o.tower.empty()) s << " tower " << o.tower;
  s << " depth " << o.depth;
  if (o.tower.empty()) s << " window " << o.window_radius();
  s << "\n";
  return s;
}

int cmd_gen(const Options& o, std::ostream& out) {
  const auto gen = graph_of(o);
  emit(o, out, write_graph(materialize_ball(gen, o.window_radius())));
  return 0;
}

int cmd_tower(const Options& o, std::ostream& out) {
  const auto t = any_tower(o);
  if (!o.out.empty()) emit(o, out, write_tower(t));
  auto s = header(o, "tower");
  s << tower_report(t);
  out << s.str();
  return 0;
}

int cmd_ends(const Options& o, std::ostream& out) {
  const auto t = any_tower(o);
  auto s = header(o, "ends");
  const auto report = ends_report(t);
  s << "count " << report.count_at_depth << (report.stabilized ? " stabilized" : " not stabilized") << "\n";
  const auto prefixes = enumerate_prefixes(t, t.depth());
  for (std::size_t k = 0; k < prefixes.size(); ++k) {
    std::vector<std::size_t> reps;
    for (std::size_t l = 0; l < t.depth(); ++l) reps.push_back(t.ids[l][prefixes[k].thread[l]]);
    s << "end " << k << " thread " << join(prefixes[k].thread, ",") << " reps " << join(reps, ",") << "\n";
  }
  out << s.str();
  return 0;
}

int cmd_h0(const Options& o, std::ostream& out) {
  const auto coeff = coefficients_of(o);
  const auto t = any_tower(o);
  if (t.depth() == 0) fail(ErrorKind::EmptyTower, "tower has no levels");
  auto s = header(o, "h0");
  s << "coefficients " << coeff.name() << "\n";
  const std::size_t bottom = t.depth() - 1;
  const auto b = o.reduced ? reduced_basis(t, thread_of(o, t)) : basis(t);
  s << "rank " << t.size(bottom) << "\n";
  if (o.reduced) s << "reduced rank " << b.size() << "\n";
  if (o.basis || o.reduced) {
    if (o.reduced) s << "thread " << join(b.thread->thread, ",") << "\n";
    s << "basis " << b.size() << (o.reduced ? " + constant" : "") << "\n";
    for (auto [l, e] : b.elements) s << "delta " << l + 1 << " " << e << " rep " << t.ids[l][e] << "\n";
  }
  const auto det = determinant(basis_matrix(t, b, bottom), coeff);
  s << "det " << det << (det == 1 || det == coeff.reduce(-1) ? " unimodular" : " NOT unimodular") << "\n";
  out << s.str();
  return 0;
}

int cmd_ray(const Options& o, std::ostream& out) {
  const auto g = graph_tower(o);
  if (!o.ray.empty()) {
    const auto ray = read_ray(read_file(o.ray));
    const auto p = points_to(ray, g.tower);
    out << "points_to " << join(p.thread, ",") << "\n";
    return 0;
  }
  const auto ray = find_ray(g.tower, thread_of(o, g.tower));
  emit(o, out, write_ray(ray.vertices));
  return 0;
}

std::vector<VertexId> ray_for(const Options& o, const GraphTower& g) {
  if (!o.ray.empty()) return read_ray(read_file(o.ray));
  return find_ray(g.tower, thread_of(o, g.tower)).vertices;
}

int cmd_retract(const Options& o, std::ostream& out) {
  const auto g = graph_tower(o);
  const auto ray = ray_for(o, g);
  const auto exh = ray_efficient_exhaustion(g.window, ray, o.depth);
  const auto rho = build_retraction(exh, ray);
  auto s = header(o, "retract");
  s << "level  a  b\n";
  for (std::size_t i = 0; i < rho.a.size(); ++i) s << i + 1 << "  " << rho.a[i] << "  " << rho.b[i] << "\n";
  s << "edge spread " << rho.edge_spread << "\n";
  const auto why = retraction_violation(exh, ray, rho);
  s << "check " << (why ? "FAIL " + *why : "ok") << "\n";
  if (!o.out.empty()) {
    std::ostringstream values;
    for (LocalIndex v = 0; v < g.window->size(); ++v) values << g.window->vertex(v) << " " << rho.values[v] << "\n";
    emit(o, out, values.str());
  }
  out << s.str();
  return why ? 1 : 0;
}

int cmd_tree(const Options& o, std::ostream& out) {
  const auto g = graph_tower(o);
  const auto emb = embed_end_tree(g.tower);
  const auto rho = tree_retraction(g.tower, emb);
  const auto back = tree_retraction_map(g.tower, emb, rho);
  const bool identity = compose(emb.tower_map, back) == identity_map(emb.tree_tower);
  auto s = header(o, "tree");
  for (std::size_t i = 0; i < emb.nodes.size(); ++i) {
    const auto& n = emb.nodes[i];
    s << "node " << i << " depth " << n.depth << " parent " << n.parent << " branch " << n.branch;
    if (i > 0) s << " path " << join_ids(n.path);
    s << "\n";
  }
  bool bijective = emb.tower_map.depth() == g.tower.depth();
  for (std::size_t l = 0; bijective && l < g.tower.depth(); ++l) {
    bijective = emb.tower_map.injective(l) && emb.tower_map.surjective(l, g.tower.size(l));
  }
  s << "tower map bijective " << (bijective ? "yes" : "no") << "\n";
  s << "retraction end-level identity " << (identity ? "yes" : "no") << "\n";
  if (!o.out.empty()) emit(o, out, emit_dot(emb));
  out << s.str();
  return 0;
}

int cmd_realize(const Options& o, std::ostream& out) {
  const auto t = any_tower(o);
  const auto r = tree_realization(t);
  auto s = header(o, "realize");
  s << "input sizes " << join(t.sizes()) << "\n";
  s << "normalized sizes " << join(r.normalized.sizes()) << "\n";
  s << "note " << r.normalized.note << "\n";
  s << "tree vertices " << r.exhaustion.window->size() << "\n";
  s << "codes " << (canonical_code(r.tower) == canonical_code(r.normalized) ? "equal" : "differ") << "\n";
  if (!o.out.empty()) emit(o, out, write_graph(*r.exhaustion.window));
  out << s.str();
  return 0;
}

int cmd_endsum(const Options& o, std::ostream& out) {
  if (o.left.empty() || o.right.empty()) throw UsageError("endsum needs --left and --right");
  const auto left = named_family(o.left, "");
  const auto right = named_family(o.right, "");
  EndSumSpec spec{with_ray(left, o.depth, o.window_radius()), with_ray(right, o.depth, o.window_radius()), o.depth,
                  o.window_radius()};
  const auto report = verify_end_sum(spec);
  out << "endsum " << o.left << " # " << o.right << " depth " << o.depth << " window " << o.window_radius() << "\n";
  out << format_end_sum_report(report);
  return report.ok() ? 0 : 1;
}

int cmd_dot(const Options& o, std::ostream& out) {
  emit(o, out, emit_dot(any_tower(o)));
  return 0;
}

}  // namespace

std::string emit_dot(const EndTower& t) {
  if (t.depth() == 0 || t.empty()) fail(ErrorKind::EmptyTower, "nothing to draw");
  std::ostringstream s;
  s << "digraph tower {\n";
  s << "  root [shape=point];\n";
  for (std::size_t l = 0; l < t.depth(); ++l) {
    for (std::size_t e = 0; e < t.size(l); ++e) {
      s << "  L" << l + 1 << "_" << e << " [label=\"" << t.ids[l][e] << "\"];\n";
    }
  }
  for (std::size_t l = 0; l < t.depth(); ++l) {
    for (std::size_t e = 0; e < t.size(l); ++e) {
      if (l == 0) {
        s << "  root -> L1_" << e << ";\n";
      } else {
        s << "  L" << l << "_" << t.parent(l, e) << " -> L" << l + 1 << "_" << e << ";\n";
      }
    }
  }
  s << "}\n";
  return s.str();
}

std::string emit_dot(const TreeEmbedding& emb) {
  std::ostringstream s;
  s << "digraph tree {\n";
  std::vector<std::string> name(emb.nodes.size(), "root");
  for (std::size_t l = 0; l < emb.tree_nodes.size(); ++l) {
    for (std::size_t k = 0; k < emb.tree_nodes[l].size(); ++k) {
      name[emb.tree_nodes[l][k]] = "L" + std::to_string(l + 1) + "_" + std::to_string(k);
    }
  }
  for (std::size_t i = 0; i < emb.nodes.size(); ++i) {
    s << "  " << name[i] << " [label=\"" << emb.nodes[i].branch << "\"];\n";
  }
  for (std::size_t i = 1; i < emb.nodes.size(); ++i) {
    s << "  " << name[emb.nodes[i].parent] << " -> " << name[i] << " [label=\"" << emb.nodes[i].path.size() - 1
      << "\"];\n";
  }
  s << "}\n";
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ends of locally finite graphs", "ends"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"gen", "write the window ball as an lfgraph v1 file"},
      {"tower", "level sizes, stabilization and canonical code of the end tower"},
      {"ends", "list the ends at the deepest level"},
      {"h0", "rank, basis and unimodularity of dimension-zero end cohomology"},
      {"ray", "find a ray to an end, or report where a given ray points"},
      {"retract", "proper retraction onto a ray"},
      {"tree", "embed the end tree and retract onto it"},
      {"realize", "realize a tower as a rooted tree"},
      {"endsum", "end sum of two families along rays"},
      {"dot", "DOT rendering of the end tower"},
  };
  std::map<std::string, CLI::App*> sub;
  for (const auto& [verb, help] : verbs) {
    auto* c = app.add_subcommand(verb, help);
    c->add_option("--family", o.family, "builtin family, e.g. line or grid(2)");
    c->add_option("--params", o.params, "family parameters k=v,...");
    c->add_option("--graph", o.graph, "lfgraph v1 file");
    c->add_option("--depth", o.depth, "number of exhaustion levels")->check(CLI::Range(1, 64));
    c->add_option("--window", o.window, "window radius (default depth + 2)")->check(CLI::Range(0, 1 << 20));
    c->add_option("--end", o.end, "thread as comma list of level indices");
    c->add_option("--ray", o.ray, "ray v1 file");
    c->add_option("--tower", o.tower, "tower v1 file");
    c->add_option("--out", o.out, "output file");
    c->add_option("--coeff", o.coeff, "z or fp:<p>");
    c->add_flag("--basis", o.basis, "list the basis");
    c->add_flag("--reduced", o.reduced, "use the reduced theory");
    if (verb == "endsum") {
      c->add_option("--left", o.left, "left family");
      c->add_option("--right", o.right, "right family");
    }
    sub[verb] = c;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sub["gen"]->parsed()) return cmd_gen(o, out);
    if (sub["tower"]->parsed()) return cmd_tower(o, out);
    if (sub["ends"]->parsed()) return cmd_ends(o, out);
    if (sub["h0"]->parsed()) return cmd_h0(o, out);
    if (sub["ray"]->parsed()) return cmd_ray(o, out);
    if (sub["retract"]->parsed()) return cmd_retract(o, out);
    if (sub["tree"]->parsed()) return cmd_tree(o, out);
    if (sub["realize"]->parsed()) return cmd_realize(o, out);
    if (sub["endsum"]->parsed()) return cmd_endsum(o, out);
    if (sub["dot"]->parsed()) return cmd_dot(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const Error& e) {
    err << "ERR:" << e.name() << " " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace lfends::cli
