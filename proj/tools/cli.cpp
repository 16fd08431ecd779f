#include "cli.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qinv/pipeline.hpp"

namespace qinv::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string spec;
  std::string grid;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::vector<std::string> checks;
  std::string construction;
  std::string bidegree;
  Caps caps;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Seed for randomized rank and point sampling");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--cap-dim", o.caps.dim, "Largest dim q built")->check(CLI::PositiveNumber);
  sub->add_option("--cap-pfaffian-dim", o.caps.pfaffian_dim, "Largest dim q for the semi-invariant")
      ->check(CLI::PositiveNumber);
  sub->add_option("--cap-minors", o.caps.minors, "Principal minors examined for the semi-invariant")
      ->check(CLI::PositiveNumber);
  sub->add_option("--cap-finder", o.caps.finder_slice, "Finder slice dimension")->check(CLI::PositiveNumber);
  sub->add_option("--cap-tensor", o.caps.tensor, "Tensor-space dimension for the mixed construction")
      ->check(CLI::PositiveNumber);
  sub->add_option("--cap-expansion", o.caps.expansion, "Term-product estimate for determinant expansion")
      ->check(CLI::PositiveNumber);
  sub->add_option("--cap-products", o.caps.products, "Products tried by the divisibility check")
      ->check(CLI::PositiveNumber);
}

std::vector<long> parse_ints(const std::string& text, const std::string& what, std::size_t min_count,
                             std::size_t max_count) {
  std::vector<long> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(item, &used);
    } catch (const std::exception&) {
      throw Error(what + ": '" + text + "' is not a comma-separated integer list");
    }
    if (used != item.size() || value < 0) throw Error(what + ": '" + text + "' needs non-negative integers");
    out.push_back(value);
  }
  if (out.size() < min_count || out.size() > max_count)
    throw Error(what + ": '" + text + "' has the wrong number of entries");
  return out;
}

Bidegree parse_bidegree(const std::string& text) {
  auto v = parse_ints(text, "bidegree", 2, 2);
  return {static_cast<unsigned>(v[0]), static_cast<unsigned>(v[1])};
}

SemidirectSpec require_spec(const Options& o) {
  if (o.spec.empty()) throw Error("--spec n,m,k is required");
  return parse_spec(o.spec);
}

json bidegree_json(const std::optional<Bidegree>& b) {
  if (!b) return nullptr;
  return {b->g, b->v};
}

std::string bidegree_text(const std::optional<Bidegree>& b) {
  return b ? "(" + std::to_string(b->g) + "," + std::to_string(b->v) + ")" : "(none)";
}

json candidates_json(const std::vector<InvariantCandidate>& cs) {
  auto arr = json::array();
  for (const auto& c : cs) {
    arr.push_back({{"label", c.label()},
                   {"construction", to_string(c.construction)},
                   {"bidegree", bidegree_json(c.bidegree)},
                   {"expected_invariant", c.expected_invariant},
                   {"normalization", c.normalization},
                   {"terms", c.poly.size()},
                   {"poly", to_string(c.poly)}});
  }
  return arr;
}

void print_candidates(std::ostream& out, const std::vector<InvariantCandidate>& cs) {
  for (const auto& c : cs) {
    out << "# " << c.label() << " bidegree " << bidegree_text(c.bidegree) << " terms " << c.poly.size()
        << (c.expected_invariant ? "" : " (not expected invariant)") << "\n"
        << to_string(c.poly) << "\n";
  }
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_classify(const Options& o, std::ostream& out) {
  std::vector<ClassificationReport> rows;
  if (!o.spec.empty() && !o.grid.empty()) throw Error("classify takes --spec or --grid, not both");
  if (!o.spec.empty()) {
    rows.push_back(classify(parse_spec(o.spec)));
  } else {
    if (o.grid.empty()) throw Error("classify needs --spec n,m,k or --grid NMAX[,MMAX[,KMAX]]");
    auto b = parse_ints(o.grid, "grid", 1, 3);
    const long nmax = b[0];
    const long mmax = b.size() > 1 ? b[1] : nmax + 1;
    const long kmax = b.size() > 2 ? b[2] : mmax;
    for (long n = 2; n <= nmax; ++n)
      for (long m = 1; m <= mmax; ++m)
        for (long k = 0; k <= std::min(m, kmax); ++k)
          rows.push_back(classify({static_cast<int>(n), static_cast<int>(m), static_cast<int>(k)}));
  }
  if (o.format == "json") {
    auto j = json_envelope("classify", std::nullopt, o.seed, o.caps);
    j["grid"] = o.grid.empty() ? json(nullptr) : json(o.grid);
    auto arr = json::array();
    for (const auto& r : rows) arr.push_back(r.to_json());
    j["rows"] = std::move(arr);
    print_json(out, j);
    return kExitOk;
  }
  out << "spec     polynomial  citation   generators  semi-invariant\n";
  for (const auto& r : rows) {
    std::string spec = r.spec.to_string();
    spec.resize(std::max<std::size_t>(spec.size(), 9), ' ');
    std::string cit = to_string(r.citation);
    cit.resize(std::max<std::size_t>(cit.size(), 11), ' ');
    std::string gens = std::to_string(r.generators.size());
    gens.resize(std::max<std::size_t>(gens.size(), 12), ' ');
    out << spec << (r.polynomial ? "yes         " : "no          ") << cit << gens << r.semi_invariant_text() << "\n";
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  RunConfig config{require_spec(o), o.seed, o.caps, {o.checks.begin(), o.checks.end()}};
  auto report = run_verify(config);
  if (o.format == "json") {
    auto j = json_envelope("verify", config.spec, o.seed, o.caps);
    auto body = report.to_json();
    j["checks"] = body["checks"];
    j["skipped"] = body["skipped"];
    j["all_passed"] = body["all_passed"];
    print_json(out, j);
  } else {
    auto body = report.to_json();
    out << "verify " << config.spec.to_string() << " seed " << o.seed << "\n";
    for (const auto& c : body["checks"]) {
      out << c["verdict"].get<std::string>() << "  " << c["name"].get<std::string>()
          << (c["expected_failure"].get<bool>() ? "  (predicted failure observed)" : "") << "\n";
    }
    for (const auto& [name, reason] : report.skipped) out << "skip  " << name << "  (" << reason << ")\n";
    out << (report.all_passed() ? "all checks passed" : "some checks failed") << "\n";
  }
  return report.all_passed() ? kExitOk : kExitCheckFailure;
}

int cmd_emit(const Options& o, std::ostream& out) {
  const auto spec = require_spec(o);
  if (o.construction.empty()) throw Error("--construction is required");
  const auto q = build_semidirect(spec, o.caps.dim);
  std::optional<Bidegree> slice;
  if (!o.bidegree.empty()) slice = parse_bidegree(o.bidegree);
  auto cs = emit_construction(q, o.construction, o.caps, slice);
  if (o.format == "json") {
    auto j = json_envelope("emit", spec, o.seed, o.caps);
    j["construction"] = o.construction;
    j["candidates"] = candidates_json(cs);
    print_json(out, j);
  } else {
    print_candidates(out, cs);
  }
  return kExitOk;
}

int cmd_find(const Options& o, std::ostream& out) {
  const auto spec = require_spec(o);
  if (o.bidegree.empty()) throw Error("--bidegree g,v is required");
  const auto slice = parse_bidegree(o.bidegree);
  const auto q = build_semidirect(spec, o.caps.dim);
  auto cs = invariant_finder(q, slice, o.caps.finder_slice);
  if (o.format == "json") {
    auto j = json_envelope("find", spec, o.seed, o.caps);
    j["bidegree"] = {slice.g, slice.v};
    j["dimension"] = cs.size();
    j["basis"] = candidates_json(cs);
    print_json(out, j);
  } else {
    out << "slice " << bidegree_text(slice) << " dimension " << cs.size() << "\n";
    print_candidates(out, cs);
  }
  return kExitOk;
}

int cmd_index(const Options& o, std::ostream& out) {
  const auto spec = require_spec(o);
  const auto q = build_semidirect(spec, o.caps.dim);
  const int by_rank = index_by_rank(q, kDefaultTrials, o.seed);
  const int by_rais = index_by_rais(spec);
  const std::string b = to_string(b_of_q(spec));
  if (o.format == "json") {
    auto j = json_envelope("index", spec, o.seed, o.caps);
    j["dim"] = q.dim();
    j["index_by_rank"] = by_rank;
    j["index_by_rais"] = by_rais;
    j["b_q"] = b;
    j["agree"] = by_rank == by_rais;
    print_json(out, j);
  } else {
    out << "dim " << q.dim() << "\nindex (rank) " << by_rank << "\nindex (Rais) " << by_rais << "\nb(q) " << b
        << "\n";
  }
  return by_rank == by_rais ? kExitOk : kExitCheckFailure;
}

int cmd_semiinv(const Options& o, std::ostream& out) {
  const auto spec = require_spec(o);
  const auto q = build_semidirect(spec, o.caps.dim);
  const auto report = classify(spec);
  const auto res = fundamental_semi_invariant(q, o.seed, o.caps.pfaffian_dim, o.caps.minors);
  const auto reference = described_semi_invariant(q, report, o.caps);
  std::optional<bool> matches;
  if (reference) matches = normalize(res.p) == normalize(*reference);
  if (o.format == "json") {
    auto j = json_envelope("semiinv", spec, o.seed, o.caps);
    j["expected"] = report.semi_invariant_text();
    j["matches_expected"] = matches ? json(*matches) : json(nullptr);
    j["rank"] = res.rank;
    j["degree"] = res.p.total_degree();
    j["bidegree"] = bidegree_json(bidegree(res.p));
    j["minors_total"] = res.minors_total;
    j["minors_used"] = res.minors_used;
    j["minors_zero"] = res.minors_zero;
    j["minors_skipped"] = res.minors_skipped;
    j["p"] = to_string(res.p);
    print_json(out, j);
  } else {
    out << "expected " << report.semi_invariant_text() << "\nrank " << res.rank << "\ndegree "
        << res.p.total_degree() << "\nmatches "
        << (matches ? (*matches ? "yes" : "no") : "n/a") << "\np = " << to_string(res.p) << "\n";
  }
  return matches.value_or(true) ? kExitOk : kExitCheckFailure;
}

std::string cap_flag(const std::string& cap) {
  static const std::vector<std::pair<std::string, std::string>> flags = {
      {"dim", "--cap-dim"},       {"pfaffian-dim", "--cap-pfaffian-dim"}, {"minors", "--cap-minors"},
      {"finder", "--cap-finder"}, {"tensor", "--cap-tensor"},             {"expansion", "--cap-expansion"},
      {"products", "--cap-products"}};
  for (const auto& [name, flag] : flags)
    if (name == cap) return " (raise with " + flag + ")";
  return " (fixed limit)";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric invariants of sl_n semidirect products"};
  app.require_subcommand(1, 1);
  Options o;

  auto* classify_cmd = app.add_subcommand("classify", "Polynomiality verdict for one spec or a grid");
  classify_cmd->add_option("--spec", o.spec, "n,m,k");
  classify_cmd->add_option("--grid", o.grid, "NMAX[,MMAX[,KMAX]] over n >= 2, m >= 1, 0 <= k <= m");
  add_common(classify_cmd, o);

  auto* verify_cmd = app.add_subcommand("verify", "Run the certificate suite");
  verify_cmd->add_option("--spec", o.spec, "n,m,k")->required();
  verify_cmd->add_option("--checks", o.checks, "Comma-separated subset of checks")
      ->delimiter(',')
      ->check(CLI::IsMember(check_names()));
  add_common(verify_cmd, o);

  auto* emit_cmd = app.add_subcommand("emit", "Print the polynomials of one construction");
  emit_cmd->add_option("--spec", o.spec, "n,m,k")->required();
  emit_cmd->add_option("--construction", o.construction, "DeltaI, Pairing, F_I, CharPoly, MixedGlobal, "
                                                          "MixedRestricted or Finder")
      ->required();
  emit_cmd->add_option("--bidegree", o.bidegree, "g,v slice for Finder");
  add_common(emit_cmd, o);

  auto* index_cmd = app.add_subcommand("index", "Index by rank and by formula");
  index_cmd->add_option("--spec", o.spec, "n,m,k")->required();
  add_common(index_cmd, o);

  auto* semiinv_cmd = app.add_subcommand("semiinv", "Fundamental semi-invariant");
  semiinv_cmd->add_option("--spec", o.spec, "n,m,k")->required();
  add_common(semiinv_cmd, o);

  auto* find_cmd = app.add_subcommand("find", "Basis of invariants in one bidegree");
  find_cmd->add_option("--spec", o.spec, "n,m,k")->required();
  find_cmd->add_option("--bidegree", o.bidegree, "g,v")->required();
  add_common(find_cmd, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(o, out);
    if (*verify_cmd) return cmd_verify(o, out);
    if (*emit_cmd) return cmd_emit(o, out);
    if (*index_cmd) return cmd_index(o, out);
    if (*semiinv_cmd) return cmd_semiinv(o, out);
    if (*find_cmd) return cmd_find(o, out);
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.cap() << " limit " << e.limit() << ", needed " << e.requested() << cap_flag(e.cap())
        << "\n";
    return kExitCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qinv::cli
