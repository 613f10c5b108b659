#include "qgkm/cli.hpp"

#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgkm/corpus.hpp"
#include "qgkm/crystal.hpp"
#include "qgkm/dualperfect.hpp"
#include "qgkm/duality.hpp"
#include "qgkm/errors.hpp"
#include "qgkm/global.hpp"
#include "qgkm/halfalg.hpp"
#include "qgkm/hwmodule.hpp"
#include "qgkm/json_io.hpp"
#include "qgkm/strings.hpp"

namespace qgkm {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Writes a JSON document to --out when given, else to the result stream.
void deliver(const Json& doc, const std::string& out_path, std::ostream& out) {
  if (out_path.empty())
    out << dump_json(doc);
  else
    write_text_file(out_path, dump_json(doc));
}

CartanDatum load_datum(const std::string& path) { return datum_from_json(load_json_file(path)); }

/// Highest weight from a JSON array of coefficients over the fundamental
/// weights: "[2]" means twice the first fundamental weight.
Weight lambda_from_string(const CartanDatum& d, const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error&) {
    throw ParseError("--lambda is not valid JSON: " + text);
  }
  if (!j.is_array())
    throw ParseError("--lambda must be a JSON array of fundamental-weight coefficients");
  if (static_cast<int>(j.size()) != d.size())
    throw ParseError("--lambda has length " + std::to_string(j.size()) + ", expected " +
                     std::to_string(d.size()));
  Weight lam = d.zero_weight();
  for (int k = 0; k < d.size(); ++k) {
    if (!j[static_cast<std::size_t>(k)].is_number_integer())
      throw ParseError("--lambda entries must be integers");
    lam = lam + d.fundamental(k).scaled(j[static_cast<std::size_t>(k)].get<std::int64_t>());
  }
  return lam;
}

std::vector<int> indices_from_csv(const std::string& text, const std::string& what, int n) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(what + " must be a comma-separated list of indices, got '" + text + "'");
    }
  }
  for (int v : out)
    if (v < 0 || v >= n)
      throw ParseError(what + " names index " + std::to_string(v) + ", valid range is 0.." +
                       std::to_string(n - 1));
  return out;
}

struct SpaceArgs {
  std::string space_path;
  std::string basis_path;
};

/// Shared input resolution: the space file, then the basis from --basis if
/// given, else the basis embedded in the space file, else the unit vectors.
std::pair<PreDualPerfectSpace<Scalar>, GradedBasis<Scalar>> load_space_and_basis(
    const SpaceArgs& a) {
  SpaceFile sf = space_file_from_json(load_json_file(a.space_path));
  GradedBasis<Scalar> B;
  if (!a.basis_path.empty())
    B = graded_basis_from_json(load_json_file(a.basis_path), sf.space);
  else if (sf.basis)
    B = *sf.basis;
  else
    B = identity_basis(sf.space);
  return {std::move(sf.space), std::move(B)};
}

GoodSequence sequence_from_flags(const CartanDatum& d, const std::string& prefix,
                                 const std::string& block) {
  if (block.empty()) {
    if (!prefix.empty()) throw UsageError("--prefix requires --seq");
    return GoodSequence::cyclic(d.size());
  }
  return GoodSequence::make(prefix.empty() ? std::vector<int>{} : indices_from_csv(prefix, "--prefix", d.size()),
                            indices_from_csv(block, "--seq", d.size()), d.size());
}

// --- subcommand bodies (each returns the exit code) ---------------------------

struct HalfalgArgs {
  std::string datum_path;
  std::int64_t depth = 0;
  std::string out_path;
};

int run_halfalg(const HalfalgArgs& a, std::ostream& out) {
  const CartanDatum d = load_datum(a.datum_path);
  const HalfAlgebra H = HalfAlgebra::build(d, a.depth);
  deliver(halfalg_dims_json(H), a.out_path, out);
  return 0;
}

struct ModuleArgs {
  std::string datum_path;
  std::string lambda_text;
  std::int64_t depth = 0;
  bool check_oint = false;
  std::string out_path;
};

int run_module(const ModuleArgs& a, std::ostream& out) {
  const CartanDatum d = load_datum(a.datum_path);
  const HWModule V = HWModule::build(d, lambda_from_string(d, a.lambda_text), a.depth);
  if (a.check_oint) {
    const OintReport rep = V.check_oint();
    deliver(oint_report_json(rep), a.out_path, out);
    return rep.passed ? 0 : 1;
  }
  deliver(module_dims_json(V), a.out_path, out);
  return 0;
}

struct CrystalArgs {
  std::string datum_path;
  std::string lambda_text;
  bool binf = false;
  std::int64_t depth = 0;
  std::string out_path;
};

int run_crystal(const CrystalArgs& a, std::ostream& out) {
  if (a.binf == !a.lambda_text.empty())
    throw UsageError("pass exactly one of --lambda and --binf");
  const CartanDatum d = load_datum(a.datum_path);
  std::unique_ptr<HWModule> V;
  std::unique_ptr<HalfAlgebra> H;
  ModelOps ops;
  if (a.binf) {
    H = std::make_unique<HalfAlgebra>(HalfAlgebra::build(d, a.depth));
    ops = halfalg_ops(*H);
  } else {
    V = std::make_unique<HWModule>(
        HWModule::build(d, lambda_from_string(d, a.lambda_text), a.depth));
    ops = module_ops(*V);
  }
  const GeneratedCrystal G = generate_crystal(ops);
  if (a.out_path.empty() || ends_with(a.out_path, ".json"))
    deliver(crystal_to_json(G.crystal), a.out_path, out);
  else if (ends_with(a.out_path, ".dot"))
    write_text_file(a.out_path, crystal_to_dot(G.crystal));
  else
    throw UsageError("--out must end in .json or .dot");
  return 0;
}

struct GlobalArgs {
  std::string datum_path;
  std::string lambda_text;
  std::int64_t depth = 0;
  std::string expansion_path;
  std::string export_space_path;
  std::string export_basis_path;
  std::string out_path;
};

int run_global(const GlobalArgs& a, std::ostream& out) {
  const CartanDatum d = load_datum(a.datum_path);
  const HWModule V = HWModule::build(d, lambda_from_string(d, a.lambda_text), a.depth);
  const ModelOps ops = module_ops(V);
  const GeneratedCrystal G = generate_crystal(ops);
  const GlobalBasis GB = solve_global_basis(ops, G);
  if (!a.export_space_path.empty() || !a.export_basis_path.empty()) {
    const PreDualPerfectSpace<Scalar> space = space_from_model(ops);
    const GlobalGradedBasis B = basis_from_global(ops, G, GB.vectors);
    if (!a.export_space_path.empty())
      write_text_file(a.export_space_path, dump_json(space_file_to_json(space, &B.basis)));
    if (!a.export_basis_path.empty())
      write_text_file(a.export_basis_path, dump_json(graded_basis_to_json(B.basis)));
  }
  const GlobalReport inv = check_global_invariants(ops, G, GB);
  bool passed = inv.passed;

  Json doc;
  doc["invariants"] = Json{{"passed", inv.passed}, {"violations", inv.violations}};
  Json expansions = Json::array();
  for (int i = 0; i < d.size(); ++i) {
    const ExpansionReport er = check_expansion(ops, G, GB, i);
    passed = passed && er.passed;
    expansions.push_back(expansion_report_to_json(er, i));
  }
  doc["expansions"] = std::move(expansions);
  doc["passed"] = passed;
  if (!a.expansion_path.empty()) write_text_file(a.expansion_path, dump_json(doc));
  deliver(doc, a.out_path, out);
  return passed ? 0 : 1;
}

struct DpbArgs {
  std::string space_path;
  std::string basis_path;
  std::string out_path;
};

int run_dpb_verify(const DpbArgs& a, std::ostream& out) {
  const auto [V, B] = load_space_and_basis({a.space_path, a.basis_path});
  const DualPerfectOutcome<Scalar> o = verify_dual_perfect(V, B);
  deliver(outcome_to_json(o), a.out_path, out);
  return o.accepted ? 0 : 1;
}

int run_dpb_graph(const DpbArgs& a, std::ostream& out) {
  const auto [V, B] = load_space_and_basis({a.space_path, a.basis_path});
  const DualPerfectOutcome<Scalar> o = verify_dual_perfect(V, B);
  if (!o.accepted) {
    deliver(outcome_to_json(o), "", out);
    return 1;
  }
  const AbstractCrystal C = extract_graph(V.datum, o.certificate);
  if (a.out_path.empty() || ends_with(a.out_path, ".json"))
    deliver(crystal_to_json(C), a.out_path, out);
  else if (ends_with(a.out_path, ".dot"))
    write_text_file(a.out_path, crystal_to_dot(C));
  else
    throw UsageError("--out must end in .json or .dot");
  return 0;
}

struct StringsArgs {
  SpaceArgs space;
  std::string seq_text;
  std::string prefix_text;
  std::string out_path;
};

int run_strings(const StringsArgs& a, std::ostream& out) {
  const auto [V, B] = load_space_and_basis(a.space);
  const GoodSequence ib = sequence_from_flags(V.datum, a.prefix_text, a.seq_text);
  const DualPerfectOutcome<Scalar> o = verify_dual_perfect(V, B);
  if (!o.accepted) {
    deliver(outcome_to_json(o), "", out);
    return 1;
  }
  deliver(string_data_to_json(ib, o.certificate), a.out_path, out);
  return 0;
}

struct MatchArgs {
  std::string space_path;
  std::vector<std::string> basis_paths;
  std::string seq_text;
  std::string prefix_text;
  std::string out_path;
};

int run_match(const MatchArgs& a, std::ostream& out) {
  SpaceFile sf = space_file_from_json(load_json_file(a.space_path));
  const GradedBasis<Scalar> B = graded_basis_from_json(load_json_file(a.basis_paths[0]), sf.space);
  const GradedBasis<Scalar> B2 = graded_basis_from_json(load_json_file(a.basis_paths[1]), sf.space);
  const GoodSequence ib = sequence_from_flags(sf.space.datum, a.prefix_text, a.seq_text);
  const MatchOutcome m = match_dual_perfect_bases(sf.space, B, B2, ib);
  deliver(match_to_json(m), a.out_path, out);
  return m.verification.passed ? 0 : 1;
}

struct DualityArgs {
  SpaceArgs space;
  bool roundtrip = false;
  std::string out_path;
};

int run_duality(const DualityArgs& a, std::ostream& out) {
  const auto [V, B] = load_space_and_basis(a.space);
  const TransposeDualityReport rep = check_transpose_duality(V, B);
  deliver(transpose_duality_to_json(rep), a.out_path, out);
  const bool passed = rep.primal_accepted && rep.dual_accepted && rep.report.passed;
  return passed ? 0 : 1;
}

struct CorpusArgs {
  std::uint64_t seed = 0;
  bool mutate = false;
  std::string list_path;
  std::string out_path;
};

int run_corpus_cmd(const CorpusArgs& a, std::ostream& out) {
  CorpusOptions opts;
  opts.seed = a.seed;
  opts.mutate = a.mutate;
  if (!a.list_path.empty()) {
    const Json list = load_json_file(a.list_path);
    if (!list.is_array())
      throw UsageError("the corpus criterion list must be a JSON array of numbers");
    if (list.empty()) throw UsageError("the corpus criterion list is empty");
    for (const Json& v : list) {
      if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 10)
        throw UsageError("corpus criteria are numbered 1 to 10");
      opts.only.insert(v.get<int>());
    }
  }
  const CorpusReport rep = run_corpus(opts);
  const std::string text = rep.render();
  out << text;
  if (!a.out_path.empty()) write_text_file(a.out_path, text);
  return rep.passed ? 0 : 1;
}

void add_out_flag(CLI::App* cmd, std::string& slot) {
  cmd->add_option("--out", slot, "write the result to this file instead of stdout");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  bool json_errors = false;

  CLI::App app{"exact truncated models, crystals, and canonical bases for quantum "
               "generalized Kac-Moody data"};
  app.require_subcommand(1);
  app.add_flag("--json-errors", json_errors, "report errors as JSON on stderr");

  int exit_code = 0;

  auto halfalg_args = std::make_shared<HalfalgArgs>();
  {
    CLI::App* c = app.add_subcommand("halfalg", "graded dimensions of the truncated lower half");
    c->add_option("--datum", halfalg_args->datum_path, "Cartan datum file")->required();
    c->add_option("--depth", halfalg_args->depth, "truncation depth")
        ->required()
        ->check(CLI::NonNegativeNumber);
    c->add_flag("--dims", "print graded dimensions (the default and only mode)");
    add_out_flag(c, halfalg_args->out_path);
    c->callback([&, halfalg_args] { exit_code = run_halfalg(*halfalg_args, out); });
  }

  auto module_args = std::make_shared<ModuleArgs>();
  {
    CLI::App* c = app.add_subcommand("module", "truncated irreducible highest-weight module");
    c->add_option("--datum", module_args->datum_path, "Cartan datum file")->required();
    c->add_option("--lambda", module_args->lambda_text,
                  "highest weight as a JSON array of fundamental-weight coefficients")
        ->required();
    c->add_option("--depth", module_args->depth, "truncation depth")
        ->required()
        ->check(CLI::NonNegativeNumber);
    c->add_flag("--dims", "print graded dimensions (the default mode)");
    c->add_flag("--check-oint", module_args->check_oint,
                "check the integrability laws instead of printing dimensions");
    add_out_flag(c, module_args->out_path);
    c->callback([&, module_args] { exit_code = run_module(*module_args, out); });
  }

  auto crystal_args = std::make_shared<CrystalArgs>();
  {
    CLI::App* c = app.add_subcommand("crystal", "generate the crystal of a module or of the lower half");
    c->add_option("--datum", crystal_args->datum_path, "Cartan datum file")->required();
    c->add_option("--lambda", crystal_args->lambda_text,
                  "highest weight as a JSON array of fundamental-weight coefficients");
    c->add_flag("--binf", crystal_args->binf, "use the lower half itself instead of a module");
    c->add_option("--depth", crystal_args->depth, "truncation depth")
        ->required()
        ->check(CLI::NonNegativeNumber);
    c->add_option("--out", crystal_args->out_path, "output file, .json or .dot");
    c->callback([&, crystal_args] { exit_code = run_crystal(*crystal_args, out); });
  }

  auto global_args = std::make_shared<GlobalArgs>();
  {
    CLI::App* c = app.add_subcommand("global", "solve for the canonical basis and check its laws");
    c->add_option("--datum", global_args->datum_path, "Cartan datum file")->required();
    c->add_option("--lambda", global_args->lambda_text,
                  "highest weight as a JSON array of fundamental-weight coefficients")
        ->required();
    c->add_option("--depth", global_args->depth, "truncation depth")
        ->required()
        ->check(CLI::NonNegativeNumber);
    c->add_option("--expansion-report", global_args->expansion_path,
                  "also write the expansion report to this file");
    c->add_option("--export-space", global_args->export_space_path,
                  "write the module as a graded space file with the solved basis embedded");
    c->add_option("--export-basis", global_args->export_basis_path,
                  "write the solved basis alone as a basis file");
    add_out_flag(c, global_args->out_path);
    c->callback([&, global_args] { exit_code = run_global(*global_args, out); });
  }

  auto dpb_verify_args = std::make_shared<DpbArgs>();
  auto dpb_graph_args = std::make_shared<DpbArgs>();
  {
    CLI::App* dpb = app.add_subcommand("dpb", "dual perfect basis verification and graph extraction");
    dpb->require_subcommand(1);
    CLI::App* v = dpb->add_subcommand("verify", "verify a graded basis and print the outcome");
    v->add_option("file", dpb_verify_args->space_path, "graded space file")->required();
    v->add_option("--basis", dpb_verify_args->basis_path,
                  "basis file (overrides any basis embedded in the space file)");
    add_out_flag(v, dpb_verify_args->out_path);
    v->callback([&, dpb_verify_args] { exit_code = run_dpb_verify(*dpb_verify_args, out); });
    CLI::App* g = dpb->add_subcommand("graph", "extract the colored graph of an accepted basis");
    g->add_option("file", dpb_graph_args->space_path, "graded space file")->required();
    g->add_option("--basis", dpb_graph_args->basis_path,
                  "basis file (overrides any basis embedded in the space file)");
    g->add_option("--out", dpb_graph_args->out_path, "output file, .json or .dot");
    g->callback([&, dpb_graph_args] { exit_code = run_dpb_graph(*dpb_graph_args, out); });
  }

  auto strings_args = std::make_shared<StringsArgs>();
  {
    CLI::App* c = app.add_subcommand("strings", "string data of a verified basis along an index sequence");
    c->add_option("--space", strings_args->space.space_path, "graded space file")->required();
    c->add_option("--basis", strings_args->space.basis_path, "basis file");
    c->add_option("--seq", strings_args->seq_text,
                  "repeating index block, comma separated (default: 0,1,...,n-1)");
    c->add_option("--prefix", strings_args->prefix_text,
                  "indices visited before the repeating block, comma separated");
    add_out_flag(c, strings_args->out_path);
    c->callback([&, strings_args] { exit_code = run_strings(*strings_args, out); });
  }

  auto match_args = std::make_shared<MatchArgs>();
  {
    CLI::App* c = app.add_subcommand("match", "match two dual perfect bases node for node");
    c->add_option("--space", match_args->space_path, "graded space file")->required();
    c->add_option("--basis", match_args->basis_paths, "the two basis files to match")
        ->required()
        ->expected(2);
    c->add_option("--seq", match_args->seq_text,
                  "repeating index block, comma separated (default: 0,1,...,n-1)");
    c->add_option("--prefix", match_args->prefix_text,
                  "indices visited before the repeating block, comma separated");
    add_out_flag(c, match_args->out_path);
    c->callback([&, match_args] { exit_code = run_match(*match_args, out); });
  }

  auto duality_args = std::make_shared<DualityArgs>();
  {
    CLI::App* c = app.add_subcommand("duality", "verify a basis together with its transpose dual");
    c->add_option("--space", duality_args->space.space_path, "graded space file")->required();
    c->add_option("--basis", duality_args->space.basis_path, "basis file");
    c->add_flag("--roundtrip", duality_args->roundtrip,
                "check the dual basis on the transposed space (always on)");
    add_out_flag(c, duality_args->out_path);
    c->callback([&, duality_args] { exit_code = run_duality(*duality_args, out); });
  }

  auto corpus_args = std::make_shared<CorpusArgs>();
  {
    CLI::App* c = app.add_subcommand("corpus", "run the acceptance corpus and print its report");
    c->add_option("--seed", corpus_args->seed, "seed for the randomized rescalings (default 0)");
    c->add_flag("--mutate", corpus_args->mutate, "inject one deliberate fault that the run must detect");
    c->add_option("--list", corpus_args->list_path,
                  "JSON array restricting the run to these criterion numbers");
    add_out_flag(c, corpus_args->out_path);
    c->callback([&, corpus_args] { exit_code = run_corpus_cmd(*corpus_args, out); });
  }

  const auto report = [&](const char* klass, const std::string& kind, const std::string& message,
                          int code) {
    if (json_errors) {
      Json doc;
      doc["error"] = klass;
      doc["kind"] = kind;
      doc["message"] = message;
      err << dump_json(doc);
    } else {
      err << "error [" << kind << "]: " << message << "\n";
    }
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report("usage", "UsageError", e.what(), 2);
  } catch (const UsageError& e) {
    return report("usage", e.kind(), e.what(), 2);
  } catch (const ParseError& e) {
    return report("usage", e.kind(), e.what(), 2);
  } catch (const InvalidDatum& e) {
    return report("usage", e.kind(), e.what(), 2);
  } catch (const NotDominant& e) {
    return report("usage", e.kind(), e.what(), 2);
  } catch (const BadSequence& e) {
    return report("usage", e.kind(), e.what(), 2);
  } catch (const Error& e) {
    return report("verification", e.kind(), e.what(), 1);
  }
  return exit_code;
}

}  // namespace qgkm
