#include "report.hpp"

#include "noise_lattice/chaos.hpp"
#include "noise_lattice/checks.hpp"
#include "noise_lattice/cofinite.hpp"
#include "noise_lattice/io.hpp"
#include "noise_lattice/randsup.hpp"
#include "noise_lattice/sigma.hpp"
#include "noise_lattice/spectrum.hpp"

#include <CLI11.hpp>
#include <boost/version.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <type_traits>

using namespace noise_lattice;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ctx {
  Backend backend = Backend::rational;
  std::string format = "json";
  std::string command;
  cli::InputDigest digest;
};

struct Outcome {
  Outcome() = default;
  Outcome(Json r, bool ok = true) : results(std::move(r)), pass(ok) {}

  Json results;
  bool pass = true;
  /// Level-dimension rows for --format csv; null when the command has none.
  Json csv_rows;
};

Json load(Ctx& ctx, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  ctx.digest.add(text);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

template <class F>
auto with_scalar(const Ctx& ctx, F&& f) {
  if (ctx.backend == Backend::rational) return f(std::type_identity<Rational>{});
  return f(std::type_identity<double>{});
}

int emit(const Ctx& ctx, Json inputs, const Outcome& out, std::optional<std::uint64_t> seed = std::nullopt) {
  if (ctx.format == "csv") {
    if (out.csv_rows.is_null()) throw UsageError("csv output is only available for level tables (chaos, spectrum)");
    std::cout << cli::render_csv(out.csv_rows);
    return out.pass ? kExitPass : kExitFail;
  }
  inputs["digest"] = ctx.digest.hex();
  Json report{{"command", ctx.command},
              {"version", NOISE_LATTICE_VERSION},
              {"versions", {{"noise_lattice", NOISE_LATTICE_VERSION},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                          std::to_string(EIGEN_MINOR_VERSION)},
                            {"boost", BOOST_LIB_VERSION}}},
              {"backend", backend_name(ctx.backend)},
              {"inputs", std::move(inputs)}};
  if (seed) report["seed"] = *seed;
  report["results"] = out.results;
  report["pass"] = out.pass;
  if (ctx.format == "text")
    std::cout << cli::render_text(report);
  else
    std::cout << report.dump(2) << '\n';
  return out.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// space, sigma, ntba

int cmd_space_dyadic(Ctx& ctx, int n) {
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    const auto space = mk_dyadic<S>(n);
    return emit(ctx, {{"n", n}}, {{{"outcomes", space->size()}, {"space", space_to_json(*space)}}});
  });
}

int cmd_space_load(Ctx& ctx, const std::string& path) {
  const Json j = load(ctx, path);
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    const auto space = space_from_json<S>(j);
    return emit(ctx, {{"file", path}},
                {{{"outcomes", space->size()}, {"total_probability", scalar_to_json<S>(space->probs().sum())}, {"space", space_to_json(*space)}}});
  });
}

int cmd_sigma(Ctx& ctx, const std::string& op, const std::string& space_path, const std::string& x_path, const std::string& y_path) {
  const Json js = load(ctx, space_path), jx = load(ctx, x_path), jy = load(ctx, y_path);
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    const auto space = space_from_json<S>(js);
    const SigmaField x = partition_from_json(jx, space->size()), y = partition_from_json(jy, space->size());
    Json result;
    if (op == "meet")
      result = partition_to_json(meet(x, y));
    else if (op == "join")
      result = partition_to_json(join(x, y));
    else if (op == "indep")
      result = independent(*space, x, y);
    else
      result = commutes(*space, x, y);
    return emit(ctx, {{"op", op}, {"space", space_path}, {"x", x_path}, {"y", y_path}}, {{{"op", op}, {"result", result}}});
  });
}

int cmd_ntba_make(Ctx& ctx, const std::string& kind, int n) {
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    const auto b = kind == "coords" ? mk_coordinate_ntba(mk_dyadic<S>(n)) : mk_parity_ntba<S>(n);
    return emit(ctx, {{"kind", kind}, {"n", n}},
                {{{"atoms", b.atom_count()}, {"elements", b.element_count()}, {"ntba", ntba_to_json(b)}}});
  });
}

int cmd_ntba_validate(Ctx& ctx, const std::string& path) {
  const Json j = load(ctx, path);
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    Json results;
    bool valid = false;
    if (j.contains("elements")) {
      const auto space = space_from_json<S>(j.at("space"));
      std::vector<SigmaField> elems;
      for (const auto& e : j.at("elements")) elems.push_back(partition_from_json(e, space->size()));
      const auto v = validate_family(*space, elems);
      valid = v.valid;
      results = {{"kind", "family"}, {"elements", elems.size()}, {"valid", v.valid}};
      if (!v.valid) results.update({{"reason", v.reason}, {"witness", v.witness}});
    } else {
      try {
        const auto b = ntba_from_json<S>(j);
        const auto v = validate_family(b.space(), b.realize_all());
        valid = v.valid;
        results = {{"kind", "ntba"}, {"atoms", b.atom_count()}, {"elements", b.element_count()}, {"valid", v.valid}};
        if (!v.valid) results.update({{"reason", v.reason}, {"witness", v.witness}});
      } catch (const DomainError& e) {
        results = {{"kind", "ntba"}, {"valid", false}, {"reason", e.what()}};
      }
    }
    return emit(ctx, {{"file", path}}, {results, valid});
  });
}

int cmd_ntba_restrict(Ctx& ctx, const std::string& path, const std::string& atoms) {
  const Json j = load(ctx, path);
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    const auto b = ntba_from_json<S>(j);
    const AtomSet e = parse_atomset(atoms, b.atom_count());
    const auto r = restrict_to(b, e);
    Json kept = Json::array();
    for (auto i : r.atom_indices) kept.push_back(i + 1);
    return emit(ctx, {{"file", path}, {"element", atomset_to_json(e)}},
                {{{"atoms_kept", kept}, {"outcome_map", r.outcome_map}, {"ntba", ntba_to_json(r.algebra)}}});
  });
}

// ---------------------------------------------------------------------------
// chaos, spectrum

int cmd_chaos_report(Ctx& ctx, const std::string& path) {
  const Json j = load(ctx, path);
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    const auto b = ntba_from_json<S>(j);
    const auto c = first_chaos(b);
    const bool audit = same_subspace(c.h1, first_chaos_all_elements(b).h1);
    Outcome out;
    out.results = {{"atoms", b.atom_count()},
                   {"dim_h1", c.h1.dim()},
                   {"classical", c.classical},
                   {"black", c.black},
                   {"generated_blocks", c.generated.block_count()},
                   {"all_elements_agree", audit}};
    out.pass = audit;
    out.csv_rows = Json::array({{{"k", 1}, {"dim", c.h1.dim()}, {"classical", c.classical}, {"black", c.black},
                                 {"generated_blocks", c.generated.block_count()}}});
    if (ctx.format == "json") {
      Json basis = Json::array();
      for (Eigen::Index k = 0; k < c.h1.dim(); ++k) basis.push_back(vector_to_json<S>(c.h1.basis().col(k)));
      out.results["h1_basis"] = basis;
    }
    return emit(ctx, {{"file", path}}, out);
  });
}

int cmd_spectrum_report(Ctx& ctx, const std::string& path) {
  const Json j = load(ctx, path);
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    const auto b = ntba_from_json<S>(j);
    const auto d = spectral_decompose(b);
    const auto ids = verify_spectral_identities(d);
    const auto grading = chaos_grading(d, first_chaos(b));
    const bool tower = sigma_tower_check(d);
    Json points = Json::array();
    for (const auto& p : d.points) {
      std::string pattern;
      for (bool bit : p.pattern) pattern += bit ? '1' : '0';
      points.push_back({{"generator_atoms", atomset_to_json(p.generator)}, {"k", p.k}, {"dim", p.eigenspace.dim()}, {"pattern", pattern}});
    }
    Json levels = Json::array();
    for (const auto& [k, dim] : grading.dims) levels.push_back({{"k", k}, {"dim", dim}});
    Outcome out;
    out.results = {{"atoms", b.atom_count()},
                   {"points", points},
                   {"levels", levels},
                   {"identities", ids.ok ? "pass" : ids.failed},
                   {"level1_is_first_chaos", grading.level1_is_first_chaos},
                   {"sigma_tower", tower},
                   {"classical", grading.classical}};
    out.pass = ids.ok && grading.level1_is_first_chaos && tower;
    out.csv_rows = levels;
    return emit(ctx, {{"file", path}}, out);
  });
}

// ---------------------------------------------------------------------------
// cofinite

using cofinite::CofElem;

Json element_json(const CofElem& e) {
  const auto c = cofinite::has_complement(e);
  return {{"element", cofinite::format(e)},
          {"membership", cofinite::membership_name(cofinite::closure_membership(e))},
          {"complement", c ? Json(cofinite::format(*c)) : Json(nullptr)}};
}

std::string direction_name(cofinite::Sequence::Direction d) {
  switch (d) {
    case cofinite::Sequence::Direction::increasing: return "increasing";
    case cofinite::Sequence::Direction::decreasing: return "decreasing";
    default: return "constant";
  }
}

Json completion_json() {
  const auto elems = cofinite::bounded_enumeration(6, 3);
  std::size_t complemented = 0, in_b = 0, mismatched = 0;
  for (const auto& e : elems) {
    const bool c = cofinite::has_complement(e).has_value();
    const bool b = cofinite::closure_membership(e) == cofinite::Membership::in_algebra;
    complemented += c;
    in_b += b;
    mismatched += c != b;
  }
  return {{"enumerated", elems.size()},
          {"complemented", complemented},
          {"in_B", in_b},
          {"verdict", mismatched == 0 ? "B itself" : "differs from B"}};
}

Json condition_c_json(const std::string& text) {
  const auto r = cofinite::condition_c_check(cofinite::parse_sequence(text));
  return {{"sequence", text},
          {"holds", r.holds},
          {"sup", cofinite::format(r.sup)},
          {"inf_complements", cofinite::format(r.inf_complements)},
          {"join", cofinite::format(r.joined)}};
}

Json double_limit_json(const std::string& text) {
  const auto r = cofinite::double_limit_check(cofinite::parse_sequence(text));
  return {{"sequence", text}, {"equal", r.equal}, {"lhs", cofinite::format(r.lhs)}, {"rhs", cofinite::format(r.rhs)}};
}

Json limit_json(const std::string& text) {
  const auto seq = cofinite::parse_sequence(text);
  Json terms = Json::array();
  for (long n = 1; n <= 5; ++n) terms.push_back(cofinite::format(seq.at(n)));
  const CofElem lim = cofinite::monotone_limit(seq);
  return {{"sequence", text},
          {"direction", direction_name(seq.direction())},
          {"first_terms", terms},
          {"limit", cofinite::format(lim)},
          {"membership", cofinite::membership_name(cofinite::closure_membership(lim))}};
}

Json ultrafilters_json() {
  Json rows = Json::array();
  for (const auto& u : cofinite::enumerate_ultrafilters(3)) rows.push_back({{"ultrafilter", u.name()}, {"infimum", cofinite::format(u.infimum())}});
  const auto a = cofinite::is_atomless();
  return {{"table", rows},
          {"atomless", a.atomless},
          {"witness", a.atomless ? Json(nullptr) : Json(a.witness.name())},
          {"witness_infimum", cofinite::format(a.witness_infimum)}};
}

int cmd_cofinite_demo(Ctx& ctx) {
  Json limits = Json::array();
  for (const char* s : {"prefix(Y(N))", "prefix(Y(2k))", "tail(0)", "comp(prefix(Y(N)))"}) limits.push_back(limit_json(s));
  Json condc = Json::array();
  for (const char* s : {"prefix(Y(N))", "prefix(Y(2k))", "const(y1)"}) condc.push_back(condition_c_json(s));
  Json dbl = Json::array();
  for (const char* s : {"prefix(Y(N))", "prefix(Y(2k))", "const(y1)"}) dbl.push_back(double_limit_json(s));
  Json elems = Json::array();
  for (const char* s : {"x3", "y1|y4", "Y(2k)", "Y(N)", "y2|x5"}) elems.push_back(element_json(cofinite::parse(s)));
  bool pass = true;
  for (const auto& d : dbl) pass = pass && d.at("equal").get<bool>();
  const Json completion = completion_json();
  pass = pass && completion.at("verdict") == "B itself";
  return emit(ctx, Json::object(),
              {{{"elements", elems}, {"limits", limits}, {"condition_c", condc}, {"double_limits", dbl},
                {"completion", completion}, {"ultrafilters", ultrafilters_json()}},
               pass});
}

int cmd_cofinite_eval(Ctx& ctx, const std::string& expr) {
  Json r = element_json(cofinite::parse(expr));
  const CofElem e = cofinite::parse(expr);
  r["index_set"] = e.index_set().to_string();
  r["tail"] = e.tail() ? Json(*e.tail()) : Json(nullptr);
  return emit(ctx, {{"expr", expr}}, {r});
}

// ---------------------------------------------------------------------------
// randsup

struct RandsupArgs {
  std::vector<double> ps;
  std::vector<int> atoms;
  std::vector<double> c;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  int atom = 0;
};

int cmd_randsup_run(Ctx& ctx, const RandsupArgs& a) {
  auto cfg = randsup::make_config(a.ps, a.trials, a.seed);
  if (!a.atoms.empty()) cfg.atom_counts = a.atoms;
  cfg.c = a.c;
  const auto ub = randsup::union_bound_report(cfg, a.atom);
  Json rows = Json::array();
  for (const auto& r : ub.rows)
    rows.push_back({{"n", r.n}, {"estimate", r.estimate}, {"exact", r.exact}, {"bound", r.bound}, {"sigma", r.sigma},
                    {"below_bound", r.below_bound}, {"near_exact", r.near_exact}});
  Json law = Json::array();
  bool pass = ub.pass;
  for (std::size_t k = 0; k < cfg.ps.size(); ++k) {
    const int atoms = std::min(cfg.atom_counts[k], 4);
    const auto chi = randsup::chi_square_law(atoms, cfg.ps[k], cfg.trials, mix64(cfg.seed ^ (k + 1)));
    law.push_back({{"level", k + 1}, {"atoms", atoms}, {"p", cfg.ps[k]}, {"statistic", chi.statistic},
                   {"dof", chi.dof}, {"p_value", chi.p_value}, {"pass", chi.pass}});
    pass = pass && chi.pass;
  }
  Json decay = Json::array();
  const auto seq = randsup::decay_sequence(cfg);
  for (std::size_t n = 0; n < seq.size(); ++n)
    decay.push_back({{"n", n + 1}, {"c", cfg.c.empty() ? double((n + 1) * (n + 1)) : cfg.c[n]}, {"value", seq[n]}});
  Json inputs{{"ps", cfg.ps}, {"atom_counts", cfg.atom_counts}, {"trials", cfg.trials}, {"atom", a.atom}};
  return emit(ctx, inputs,
              {{{"union_bound", {{"atom", ub.atom}, {"monotone", ub.monotone}, {"rows", rows}}},
                {"sample_law", law},
                {"decay", decay}},
               pass},
              cfg.seed);
}

// ---------------------------------------------------------------------------
// check, demo

int cmd_check_all(Ctx& ctx, const checks::Options& o) {
  return with_scalar(ctx, [&]<class S>(std::type_identity<S>) {
    const auto suites = checks::run_all<S>(o);
    Json rows = Json::array(), failed = Json::array();
    for (const auto& s : suites) {
      rows.push_back(checks::to_json(s));
      if (!s.passed()) failed.push_back(s.name);
    }
    return emit(ctx, {{"cases", o.cases}, {"inject_fault", o.inject_fault}},
                {{{"suites", rows}, {"failed", failed}}, failed.empty()}, o.seed);
  });
}

int cmd_demo_feldman(Ctx& ctx) {
  bool pass = true;
  Json parity = Json::array();
  for (int n = 1; n <= 6; ++n) {
    const auto c = first_chaos(mk_parity_ntba<Rational>(n));
    parity.push_back({{"n", n}, {"dim_h1", c.h1.dim()}, {"expected", n + 1}, {"classical", c.classical}});
    pass = pass && c.h1.dim() == n + 1;
  }
  // first chaos of the n = 3 truncation is spanned by the sign products and the last sign
  const int gn = 3;
  const auto b3 = mk_parity_ntba<Rational>(gn);
  const auto h3 = first_chaos(b3).h1;
  Json gens = Json::array();
  std::vector<RV<Rational>> gvec;
  for (int i = 1; i <= gn + 1; ++i) {
    const std::uint64_t mask = i <= gn ? (std::uint64_t{3} << (i - 1)) : (std::uint64_t{1} << gn);
    gvec.push_back(walsh(b3.space(), mask));
    gens.push_back(i <= gn ? "xi" + std::to_string(i) + "*xi" + std::to_string(i + 1) : "xi" + std::to_string(i));
  }
  const bool spans = same_subspace(h3, span(b3.space_ptr(), gvec));
  pass = pass && spans;
  Json pairing = Json::array();
  for (int n = 1; n <= 6; ++n) {
    auto space = mk_dyadic<Rational>(n + 1);
    std::vector<RV<Rational>> vs;
    for (int i = 1; i <= n; ++i) vs.push_back(walsh(*space, std::uint64_t{3} << (i - 1)));
    const SigmaField s = sigma_of(span(space, vs));
    const std::size_t flip = space->size() - 1;  // outcome index of -omega is the bitwise complement
    bool pairs = true;
    for (std::size_t w = 0; w < space->size(); ++w) pairs = pairs && s.block_of(w) == s.block_of(w ^ flip) && s.block_of(w) != s.block_of(w ^ 1);
    pairing.push_back({{"n", n}, {"outcomes", space->size()}, {"blocks", s.block_count()}, {"pairs_omega_with_minus_omega", pairs}});
    pass = pass && pairs && s.block_count() == (std::size_t{1} << n);
  }
  const Json condc = condition_c_json("prefix(Y(N))");
  pass = pass && !condc.at("holds").get<bool>() && condc.at("sup") == cofinite::format(CofElem::Y(cofinite::NatSet::all()));
  const Json infinite = element_json(cofinite::parse("Y(2k)"));
  pass = pass && infinite.at("complement").is_null();
  const Json completion = completion_json();
  pass = pass && completion.at("verdict") == "B itself";
  return emit(ctx, {{"demo", "feldman"}},
              {{{"parity_first_chaos", parity},
                {"first_chaos_generators", {{"n", gn}, {"generators", gens}, {"span_first_chaos", spans}}},
                {"sign_pairing", pairing},
                {"condition_c", condc},
                {"infinite_y_set", infinite},
                {"completion", completion},
                {"ultrafilters", ultrafilters_json()}},
               pass});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite noise-type Boolean algebras, first chaos and spectra"};
  app.require_subcommand(1);
  app.fallthrough();
  Ctx ctx;
  std::string mode;
  app.add_option("--mode", mode, "Numeric backend (default from NOISE_LATTICE_MODE)")->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--format", ctx.format, "Output format")->check(CLI::IsMember({"json", "text", "csv"}));

  std::function<int()> action;

  auto* space = app.add_subcommand("space", "Probability spaces")->require_subcommand(1);
  int dyadic_n = 0;
  space->add_subcommand("dyadic", "Uniform space on n signs")->callback([&] { action = [&] { return cmd_space_dyadic(ctx, dyadic_n); }; })
      ->add_option("n", dyadic_n)->required();
  std::string path, path2, path3, path4;
  space->add_subcommand("load", "Validate a space file")->callback([&] { action = [&] { return cmd_space_load(ctx, path); }; })
      ->add_option("file", path)->required();

  auto* sigma = app.add_subcommand("sigma", "Lattice operations on partitions");
  std::string sigma_op;
  sigma->add_option("op", sigma_op)->required()->check(CLI::IsMember({"meet", "join", "indep", "commutes"}));
  sigma->add_option("space", path)->required();
  sigma->add_option("x", path2)->required();
  sigma->add_option("y", path3)->required();
  sigma->callback([&] { action = [&] { return cmd_sigma(ctx, sigma_op, path, path2, path3); }; });

  auto* ntba = app.add_subcommand("ntba", "Noise-type Boolean algebras")->require_subcommand(1);
  int ntba_n = 0;
  ntba->add_subcommand("coords", "Coordinate algebra on n signs")->callback([&] { action = [&] { return cmd_ntba_make(ctx, "coords", ntba_n); }; })
      ->add_option("n", ntba_n)->required();
  ntba->add_subcommand("parity", "Parity truncation with n sign products")->callback([&] { action = [&] { return cmd_ntba_make(ctx, "parity", ntba_n); }; })
      ->add_option("n", ntba_n)->required();
  ntba->add_subcommand("validate", "Audit an NTBA or a family of partitions")->callback([&] { action = [&] { return cmd_ntba_validate(ctx, path); }; })
      ->add_option("file", path)->required();
  auto* restrict_cmd = ntba->add_subcommand("restrict", "Restrict to an element given by 1-based atom indices");
  restrict_cmd->add_option("file", path)->required();
  restrict_cmd->add_option("atomset", path4)->required();
  restrict_cmd->callback([&] { action = [&] { return cmd_ntba_restrict(ctx, path, path4); }; });

  auto* chaos = app.add_subcommand("chaos", "First chaos")->require_subcommand(1);
  chaos->add_subcommand("report", "First chaos of an NTBA file")->callback([&] { action = [&] { return cmd_chaos_report(ctx, path); }; })
      ->add_option("file", path)->required();

  auto* spectrum = app.add_subcommand("spectrum", "Spectral decomposition")->require_subcommand(1);
  spectrum->add_subcommand("report", "Spectral points and chaos levels of an NTBA file")
      ->callback([&] { action = [&] { return cmd_spectrum_report(ctx, path); }; })
      ->add_option("file", path)->required();

  auto* cof = app.add_subcommand("cofinite", "The finite/cofinite sign-product algebra")->require_subcommand(1);
  cof->add_subcommand("demo", "Closure, completion, condition (c) and ultrafilter dossier")
      ->callback([&] { action = [&] { return cmd_cofinite_demo(ctx); }; });
  std::string expr;
  cof->add_subcommand("eval", "Canonical form of an element expression")->callback([&] { action = [&] { return cmd_cofinite_eval(ctx, expr); }; })
      ->add_option("expr", expr)->required();
  cof->add_subcommand("limit", "Limit of a monotone sequence")
      ->callback([&] { action = [&] { return emit(ctx, {{"sequence", expr}}, {limit_json(expr)}); }; })
      ->add_option("sequence", expr)->required();
  cof->add_subcommand("condc", "Condition (c) on an increasing sequence")
      ->callback([&] { action = [&] { return emit(ctx, {{"sequence", expr}}, {condition_c_json(expr)}); }; })
      ->add_option("sequence", expr)->required();
  cof->add_subcommand("double", "Double limit interchange on an increasing sequence")
      ->callback([&] {
        action = [&] {
          const Json r = double_limit_json(expr);
          return emit(ctx, {{"sequence", expr}}, {r, r.at("equal").get<bool>()});
        };
      })
      ->add_option("sequence", expr)->required();

  auto* rs = app.add_subcommand("randsup", "Random supremum experiments")->require_subcommand(1);
  RandsupArgs ra;
  auto* rs_run = rs->add_subcommand("run", "Join process, union bound and sampling law");
  rs_run->add_option("--ps", ra.ps, "Level probabilities")->required()->delimiter(',');
  rs_run->add_option("--atoms", ra.atoms, "Atom count per level")->delimiter(',');
  rs_run->add_option("--c", ra.c, "Exponents c_n for the decay report (default n^2)")->delimiter(',');
  rs_run->add_option("--trials", ra.trials);
  rs_run->add_option("--seed", ra.seed);
  rs_run->add_option("--atom", ra.atom, "Finest-level atom tracked by the union bound");
  rs_run->callback([&] { action = [&] { return cmd_randsup_run(ctx, ra); }; });

  auto* check = app.add_subcommand("check", "Property suites")->require_subcommand(1);
  checks::Options co;
  auto* check_all = check->add_subcommand("all", "Run every suite on seeded random instances");
  check_all->add_option("--seed", co.seed);
  check_all->add_option("--cases", co.cases);
  check_all->add_flag("--inject-fault", co.inject_fault, "Swap two probabilities in product spaces");
  check_all->callback([&] { action = [&] { return cmd_check_all(ctx, co); }; });

  std::string demo_name = "feldman";
  auto* demo = app.add_subcommand("demo", "Narrative dossiers");
  demo->add_option("name", demo_name)->check(CLI::IsMember({"feldman"}));
  demo->callback([&] { action = [&] { return cmd_demo_feldman(ctx); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  for (int i = 1; i < argc; ++i) {
    ctx.command += (i > 1 ? " " : "") + std::string(argv[i]);
    ctx.digest.add(argv[i]);
  }
  try {
    ctx.backend = mode.empty() ? backend_from_env() : parse_backend(mode);
    return action();
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency: " << e.what() << '\n';
    return kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // ParseError, PreconditionError, UnsupportedSequence
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitFail;
  }
}
