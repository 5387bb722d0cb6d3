#include "hillgts/cli.hpp"

#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hillgts/dpo.hpp"
#include "hillgts/encoder.hpp"
#include "hillgts/graph_io.hpp"
#include "hillgts/kernel.hpp"
#include "hillgts/logic_io.hpp"
#include "hillgts/prover.hpp"
#include "hillgts/sampling.hpp"
#include "hillgts/syntax.hpp"

namespace hillgts {

namespace {

using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

std::string swap_ext(const std::string& path, const std::string& ext) {
  auto slash = path.find_last_of('/');
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash))
    return path + ext;
  return path.substr(0, dot) + ext;
}

std::string failure_condition(const CheckFailure& f) {
  if (f.condition == "delta-split") return "linear context split mismatch";
  if (f.condition == "gamma-split") return "non-linear context split mismatch";
  return f.condition;
}

std::string failure_line(const CheckFailure& f) {
  return f.path + ": " + failure_condition(f) + ": " + f.detail;
}

// Prints a derivation and makes sure the bytes parse and check again before
// they reach disk.
void emit_certificate(const std::string& path, const ProofTree& tree) {
  std::string text = print_proof(tree);
  ProofPtr back = parse_proof(text, path);
  CheckReport rep = check(back);
  if (!rep.ok())
    throw CliError{1, "internal: emitted derivation failed to re-check: " +
                          failure_line(rep.failures.front())};
  write_file(path, text);
}

Hypergraph load_first_graph(const std::string& path) {
  HgFile f = parse_hg(read_file(path), path);
  if (f.graphs.empty()) throw CliError{2, path + ": no graph blocks"};
  return f.graphs.front();
}

// Retypes a graph over the minimal type graph covering exactly the labels it
// uses, so graphs from files with different type declarations compare by
// structure.
Hypergraph retype_minimal(const Hypergraph& g) {
  auto tg = std::make_shared<TypeGraph>();
  tg->name = "minimal";
  std::set<std::string> nts;
  for (const auto& [id, t] : g.nodes) nts.insert(t);
  tg->node_types.assign(nts.begin(), nts.end());
  for (const auto& [id, e] : g.edges) {
    if (tg->edge_types.count(e.type)) continue;
    if (g.type_graph) {
      if (const auto* known = g.type_graph->arity(e.type)) {
        tg->edge_types[e.type] = *known;
        continue;
      }
    }
    std::vector<std::string> ar;
    for (const auto& n : e.attach) ar.push_back(g.nodes.at(n));
    tg->edge_types[e.type] = ar;
  }
  Hypergraph out = g;
  out.type_graph = std::move(tg);
  return out;
}

json match_json(const Morphism& m, std::size_t index) {
  json nodes = json::object(), edges = json::object();
  for (const auto& [k, v] : m.node_map) nodes[k] = v;
  for (const auto& [k, v] : m.edge_map) edges[k] = v;
  return json{{"index", index}, {"nodes", nodes}, {"edges", edges}};
}

std::string match_text(const Morphism& m) {
  std::ostringstream os;
  os << "nodes {";
  bool first = true;
  for (const auto& [k, v] : m.node_map) {
    os << (first ? "" : ", ") << k << " -> " << v;
    first = false;
  }
  os << "} edges {";
  first = true;
  for (const auto& [k, v] : m.edge_map) {
    os << (first ? "" : ", ") << k << " -> " << v;
    first = false;
  }
  os << "}";
  return os.str();
}

int cmd_check(const std::string& path, const std::string& format,
              std::ostream& out) {
  ProofPtr tree = parse_proof(read_file(path), path);
  CheckReport rep = check(tree);
  if (format == "structured") {
    json j{{"command", "check"}, {"input", path}, {"ok", rep.ok()}};
    j["nodes"] = proof_size(*tree);
    j["failures"] = json::array();
    for (const auto& f : rep.failures)
      j["failures"].push_back({{"path", f.path},
                               {"condition", failure_condition(f)},
                               {"detail", f.detail}});
    out << j.dump(2) << "\n";
  } else if (rep.ok()) {
    out << path << ": ok (" << proof_size(*tree) << " nodes)\n";
  } else {
    for (const auto& f : rep.failures)
      out << path << ": " << failure_line(f) << "\n";
  }
  return rep.ok() ? 0 : 1;
}

int cmd_prove(const std::string& path, int depth, const std::string& out_path,
              const std::string& format, std::ostream& out) {
  HillFile f = parse_hill(read_file(path), path);
  if (f.sequents.empty())
    throw CliError{2, path + ": no sequent declarations"};
  if (!out_path.empty() && f.sequents.size() != 1)
    throw CliError{2, "--out requires a file with exactly one sequent"};

  ProverOptions opts;
  opts.max_depth = depth;
  bool all_proved = true;
  json results = json::array();
  for (const auto& [name, seq] : f.sequents) {
    ProverResult r = prove(seq, opts);
    json jr{{"name", name}, {"proved", r.proof != nullptr},
            {"visited", r.visited}};
    if (r.proof) {
      jr["nodes"] = proof_size(*r.proof);
      if (format != "structured")
        out << name << ": proved (" << proof_size(*r.proof) << " nodes, "
            << r.visited << " states visited)\n";
      if (!out_path.empty()) {
        emit_certificate(out_path, *r.proof);
        jr["certificate"] = out_path;
        if (format != "structured") out << "wrote " << out_path << "\n";
      }
    } else {
      all_proved = false;
      jr["exhausted"] = r.exhausted;
      if (format != "structured")
        out << name
            << (r.exhausted ? ": refuted, no derivation exists"
                            : ": no proof within bound")
            << "\n";
    }
    results.push_back(std::move(jr));
  }
  if (format == "structured")
    out << json{{"command", "prove"}, {"input", path}, {"depth", depth},
                {"results", results}}
               .dump(2)
        << "\n";
  return all_proved ? 0 : 1;
}

int cmd_apply(const std::string& sys_path, const std::string& graph_path,
              std::string rule_name, int match_idx, bool list,
              const std::string& out_path, const std::string& format,
              std::ostream& out) {
  Gts sys = parse_gts(read_file(sys_path), sys_path);
  Hypergraph host;
  if (!graph_path.empty()) {
    host = load_first_graph(graph_path);
  } else if (sys.start) {
    host = *sys.start;
  } else {
    throw CliError{2, sys_path + ": no start graph; pass --graph"};
  }

  if (rule_name.empty()) {
    if (sys.rules.size() == 1)
      rule_name = sys.rules.front().name;
    else
      throw CliError{2, "pick a rule with --rule"};
  }
  const Rule* rule = sys.rule(rule_name);
  if (!rule) throw CliError{2, "unknown rule: " + rule_name};

  auto matches = find_matches(*rule, host);
  if (list) {
    if (format == "structured") {
      json j{{"command", "apply"}, {"rule", rule_name},
             {"matches", json::array()}};
      for (std::size_t i = 0; i < matches.size(); ++i)
        j["matches"].push_back(match_json(matches[i].m, i + 1));
      out << j.dump(2) << "\n";
    } else {
      for (std::size_t i = 0; i < matches.size(); ++i)
        out << "match " << (i + 1) << ": " << match_text(matches[i].m)
            << "\n";
      if (matches.empty()) out << "no matches of rule " << rule_name << "\n";
    }
    return 0;
  }
  if (matches.empty())
    throw CliError{1, "no matches of rule " + rule_name + " into " +
                          host.name};
  if (match_idx < 1 || static_cast<std::size_t>(match_idx) > matches.size())
    throw CliError{2, "match index out of range (1.." +
                          std::to_string(matches.size()) + ")"};

  StepRecord step = apply(matches[match_idx - 1]);
  ProofPtr cert = emit_step_derivation(step);
  CheckReport cr = check(cert);
  if (!cr.ok())
    throw CliError{1, "internal: step certificate failed to check: " +
                          failure_line(cr.failures.front())};

  HgFile result_file{host.type_graph, {step.result}};
  std::string cert_path;
  if (!out_path.empty()) {
    write_file(out_path, print_hg(result_file));
    cert_path = swap_ext(out_path, ".prf");
    emit_certificate(cert_path, *cert);
  }
  if (format == "structured") {
    json j{{"command", "apply"},
           {"rule", rule_name},
           {"match", match_idx},
           {"result", step.result.name},
           {"nodes", step.result.nodes.size()},
           {"edges", step.result.edges.size()},
           {"certificate_nodes", proof_size(*cert)}};
    if (!out_path.empty()) {
      j["result_file"] = out_path;
      j["certificate_file"] = cert_path;
    }
    out << j.dump(2) << "\n";
  } else {
    out << "applied " << rule_name << " at match " << match_idx << ": "
        << step.result.nodes.size() << " nodes, "
        << step.result.edges.size() << " edges\n";
    out << "certificate ok (" << proof_size(*cert) << " nodes)\n";
    if (!out_path.empty())
      out << "wrote " << out_path << " and " << cert_path << "\n";
    else
      out << print_hg(result_file);
  }
  return 0;
}

int cmd_search(const std::string& sys_path, const std::string& target_path,
               int depth, const std::string& format, std::ostream& out) {
  Gts sys = parse_gts(read_file(sys_path), sys_path);
  if (!sys.start) throw CliError{2, sys_path + ": no start graph"};
  Hypergraph target = load_first_graph(target_path);
  auto trace = reachable(sys, target, depth);
  if (format == "structured") {
    json j{{"command", "search"}, {"target", target.name},
           {"depth", depth}, {"found", trace.has_value()}};
    j["steps"] = json::array();
    if (trace)
      for (const auto& s : trace->steps)
        j["steps"].push_back(
            {{"rule", s.rule_name}, {"match", s.match_index}});
    out << j.dump(2) << "\n";
  } else if (trace) {
    for (std::size_t i = 0; i < trace->steps.size(); ++i)
      out << (i + 1) << ": rule " << trace->steps[i].rule_name << " match "
          << trace->steps[i].match_index << "\n";
    out << "reached " << target.name << " in " << trace->steps.size()
        << " steps\n";
  } else {
    out << "not reachable within depth " << depth << "\n";
  }
  return trace ? 0 : 1;
}

int cmd_encode(const std::string& path, const std::string& out_path,
               const std::string& format, std::ostream& out) {
  Hypergraph g = load_first_graph(path);
  Encoding enc = encode_graph(g);
  HillFile hf;
  hf.formulas.emplace_back(g.name, enc.sequent.goal);
  hf.sequents.emplace_back(g.name, enc.sequent);
  std::string hill_text = print_hill(hf);
  std::string cert_path;
  if (!out_path.empty()) {
    write_file(out_path, hill_text);
    cert_path = swap_ext(out_path, ".prf");
    emit_certificate(cert_path, *enc.derivation);
  }
  if (format == "structured") {
    json j{{"command", "encode"},
           {"graph", g.name},
           {"formula", print_formula(enc.sequent.goal)},
           {"sequent", print_sequent(enc.sequent)},
           {"certificate_nodes", proof_size(*enc.derivation)}};
    if (!out_path.empty()) {
      j["formula_file"] = out_path;
      j["certificate_file"] = cert_path;
    }
    out << j.dump(2) << "\n";
  } else if (!out_path.empty()) {
    out << "wrote " << out_path << " and " << cert_path << "\n";
  } else {
    out << hill_text;
  }
  return 0;
}

int cmd_decode(const std::string& path, const std::string& out_path,
               const std::string& format, std::ostream& out) {
  HillFile hf = parse_hill(read_file(path), path);
  if (hf.formulas.empty())
    throw CliError{2, path + ": no formula declarations"};
  Hypergraph g;
  try {
    g = decode(hf.formulas.front().second);
  } catch (const NotNormalForm& e) {
    throw CliError{2, path + ": not a graph representative: " +
                          std::string(e.what())};
  }
  g.name = hf.formulas.front().first;
  HgFile outf{g.type_graph, {g}};
  std::string text = print_hg(outf);
  if (!out_path.empty()) write_file(out_path, text);
  if (format == "structured") {
    json nodes = json::object(), edges = json::object();
    for (const auto& [id, t] : g.nodes) nodes[id] = t;
    for (const auto& [id, e] : g.edges)
      edges[id] = {{"type", e.type}, {"attach", e.attach}};
    json j{{"command", "decode"}, {"graph", g.name},
           {"nodes", nodes}, {"edges", edges}};
    if (!out_path.empty()) j["graph_file"] = out_path;
    out << j.dump(2) << "\n";
  } else if (!out_path.empty()) {
    out << "wrote " << out_path << "\n";
  } else {
    out << text;
  }
  return 0;
}

int cmd_verify(const std::string& sys_path, int samples, unsigned seed,
               const std::string& format, std::ostream& out) {
  Gts sys = parse_gts(read_file(sys_path), sys_path);
  if (sys.rules.empty()) throw CliError{2, sys_path + ": no rules"};

  std::vector<std::pair<std::string, Hypergraph>> hosts;
  if (sys.start) hosts.emplace_back("start", *sys.start);
  std::mt19937 rng(seed);
  for (int k = 1; k <= samples; ++k)
    hosts.emplace_back("sample " + std::to_string(k),
                       sample_graph(rng, sys.type_graph));

  std::size_t instances = 0, mismatches = 0;
  json jruns = json::array();
  for (const auto& [label, host] : hosts) {
    for (const auto& rule : sys.rules) {
      CorrespondenceReport rep = verify_correspondence(host, rule);
      instances += rep.instances.size();
      mismatches += rep.mismatches.size();
      if (format == "structured") {
        json jr{{"host", label},
                {"rule", rule.name},
                {"engine_classes", rep.engine_classes},
                {"certified_classes", rep.certified_classes},
                {"matches", rep.instances.size()},
                {"ok", rep.ok()}};
        jr["mismatches"] = rep.mismatches;
        jruns.push_back(std::move(jr));
      } else {
        out << label << ", rule " << rule.name << ": engine "
            << rep.engine_classes << ", certified " << rep.certified_classes
            << ", matches " << rep.instances.size()
            << (rep.ok() ? "" : "  MISMATCH") << "\n";
        if (!rep.ok()) {
          std::istringstream is(rep.to_text());
          for (std::string line; std::getline(is, line);)
            out << "  " << line << "\n";
        }
      }
    }
  }
  if (format == "structured") {
    out << json{{"command", "verify"}, {"samples", samples}, {"seed", seed},
                {"instances", instances}, {"mismatch_count", mismatches},
                {"ok", mismatches == 0}, {"runs", jruns}}
               .dump(2)
        << "\n";
  } else {
    out << "checked " << instances << " rule applications across "
        << hosts.size() << " hosts; mismatches: " << mismatches << "\n";
    out << (mismatches == 0 ? "correspondence holds"
                            : "correspondence failed")
        << "\n";
  }
  return mismatches == 0 ? 0 : 1;
}

int cmd_iso(const std::string& path_a, const std::string& path_b,
            const std::string& format, std::ostream& out) {
  Hypergraph a = retype_minimal(load_first_graph(path_a));
  Hypergraph b = retype_minimal(load_first_graph(path_b));
  auto isos = find_isomorphisms(a, b, 1);
  if (format == "structured") {
    json j{{"command", "iso"}, {"isomorphic", !isos.empty()}};
    if (!isos.empty()) {
      json nodes = json::object(), edges = json::object();
      for (const auto& [k, v] : isos.front().node_map) nodes[k] = v;
      for (const auto& [k, v] : isos.front().edge_map) edges[k] = v;
      j["nodes"] = nodes;
      j["edges"] = edges;
    }
    out << j.dump(2) << "\n";
  } else if (isos.empty()) {
    out << "not isomorphic\n";
  } else {
    out << "isomorphic\n";
    for (const auto& [k, v] : isos.front().node_map)
      out << "node " << k << " -> " << v << "\n";
    for (const auto& [k, v] : isos.front().edge_map)
      out << "edge " << k << " -> " << v << "\n";
  }
  return isos.empty() ? 1 : 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"typed hypergraph rewriting with certified derivations"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string input, input_b, out_path, graph_path, rule_name, target_path;
  int depth = 8, match_idx = 1, samples = 20;
  unsigned seed = 0;
  bool list = false;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));
  };

  CLI::App* c_check = app.add_subcommand("check", "check a derivation file");
  c_check->add_option("file", input, "derivation (.prf)")->required();
  add_format(c_check);

  CLI::App* c_prove =
      app.add_subcommand("prove", "search for derivations of the sequents");
  c_prove->add_option("file", input, "logic file (.hill)")->required();
  c_prove->add_option("--depth", depth, "search depth bound");
  c_prove->add_option("--out", out_path, "derivation output path");
  add_format(c_prove);

  CLI::App* c_apply =
      app.add_subcommand("apply", "apply a rule and certify the step");
  c_apply->add_option("system", input, "system file (.gts)")->required();
  c_apply->add_option("--graph", graph_path, "host graph (.hg), else start");
  c_apply->add_option("--rule", rule_name, "rule name");
  c_apply->add_option("--match", match_idx, "match index (1-based)");
  c_apply->add_flag("--list", list, "list matches and exit");
  c_apply->add_option("--out", out_path, "result graph output path");
  add_format(c_apply);

  CLI::App* c_search =
      app.add_subcommand("search", "breadth-first reachability from start");
  c_search->add_option("system", input, "system file (.gts)")->required();
  c_search->add_option("--target", target_path, "target graph (.hg)")
      ->required();
  c_search->add_option("--depth", depth, "step bound");
  add_format(c_search);

  CLI::App* c_encode =
      app.add_subcommand("encode", "encode a graph as a logic formula");
  c_encode->add_option("file", input, "graph file (.hg)")->required();
  c_encode->add_option("--out", out_path, "logic output path (.hill)");
  add_format(c_encode);

  CLI::App* c_decode =
      app.add_subcommand("decode", "decode a representative formula");
  c_decode->add_option("file", input, "logic file (.hill)")->required();
  c_decode->add_option("--out", out_path, "graph output path (.hg)");
  add_format(c_decode);

  CLI::App* c_verify = app.add_subcommand(
      "verify", "compare engine steps against certified derivations");
  c_verify->add_option("system", input, "system file (.gts)")->required();
  c_verify->add_option("--samples", samples, "random host graphs to try");
  c_verify->add_option("--seed", seed, "random seed");
  add_format(c_verify);

  CLI::App* c_iso = app.add_subcommand("iso", "test graph isomorphism");
  c_iso->add_option("a", input, "first graph (.hg)")->required();
  c_iso->add_option("b", input_b, "second graph (.hg)")->required();
  add_format(c_iso);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_check->parsed()) return cmd_check(input, format, out);
    if (c_prove->parsed())
      return cmd_prove(input, depth, out_path, format, out);
    if (c_apply->parsed())
      return cmd_apply(input, graph_path, rule_name, match_idx, list,
                       out_path, format, out);
    if (c_search->parsed())
      return cmd_search(input, target_path, depth, format, out);
    if (c_encode->parsed()) return cmd_encode(input, out_path, format, out);
    if (c_decode->parsed()) return cmd_decode(input, out_path, format, out);
    if (c_verify->parsed())
      return cmd_verify(input, samples, seed, format, out);
    if (c_iso->parsed()) return cmd_iso(input, input_b, format, out);
  } catch (const CliError& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const GluingViolation& v) {
    err << v.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace hillgts
