// Command-line surface for the Legendrian invariant engine: path matrices,
// Bruhat-style cells, representation/augmentation counts, satellites, the
// ruling identities, interpolation, colored values, stored-polynomial
// comparisons, and the acceptance suite.
//
// Exit codes: 0 success/verified, 1 verification mismatch, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "replab/verify.hpp"

using json = nlohmann::ordered_json;
using namespace replab;

namespace {

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<long long> parse_lls(const std::string& csv) {
  std::vector<long long> out;
  for (int v : parse_ints(csv)) out.push_back(v);
  return out;
}

Dga load_knot(const std::string& spec) {
  if (spec.find('.') == std::string::npos) return builtin_knot(spec);
  std::ifstream in(spec);
  if (!in.good()) throw CLI::ValidationError("--knot", "cannot open " + spec);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dga(ss.str());
}

json sqrtq_json(const SqrtQ& v) {
  json j;
  j["a"] = rat_str(v.a);
  j["b"] = rat_str(v.b);
  j["q"] = v.q;
  double approx = static_cast<double>(v.a);
  if (v.q) approx += static_cast<double>(v.b) * std::sqrt(static_cast<double>(v.q));
  j["decimal"] = approx;
  return j;
}

std::string sqrtq_str(const SqrtQ& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Mat parse_mat(const std::string& csv, unsigned n) {
  auto vals = parse_ints(csv);
  if (vals.size() != size_t(n) * n)
    throw CLI::ValidationError("--matrix", "expected " + std::to_string(n * n) + " entries");
  Mat m(n, n);
  for (size_t i = 0; i < vals.size(); ++i) m.e[i] = static_cast<unsigned>(vals[i]);
  return m;
}

void emit(bool as_json, const json& j, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Legendrian-knot invariants from representation counts"};
  app.require_subcommand(1);
  app.fallthrough();

  bool as_json = false;
  unsigned threads = 0;
  app.add_flag("--json", as_json, "machine-readable JSON output");
  app.add_option("--threads", threads, "worker cap (default: REPLAB_THREADS or cores)");

  auto count_opt = [&]() {
    RepCountOptions o;
    o.threads = threads;
    return o;
  };

  int rc = 0;

  // path-matrix
  std::string pm_braid, pm_mu;
  bool pm_xy = false, pm_inverse = false;
  auto* pm = app.add_subcommand("path-matrix", "symbolic path matrix of a positive braid");
  pm->add_option("--braid", pm_braid, "braid word, e.g. \"s1 s2 s1\"")->required();
  pm->add_option("--mu", pm_mu, "Maslov potentials, comma separated")->required();
  pm->add_flag("--xy", pm_xy, "xy-projection matrix (with basepoints and dips)");
  pm->add_flag("--inverse", pm_inverse, "print the inverse matrix");
  pm->callback([&]() {
    auto mu = parse_ints(pm_mu);
    Braid b = parse_braid(pm_braid, static_cast<unsigned>(mu.size()));
    auto S = make_braid_symbols(b, mu);
    PolyMat P = pm_xy ? (pm_inverse ? path_matrix_xy_inverse(S) : path_matrix_xy(S))
                      : (pm_inverse ? path_matrix_xz_inverse(S) : path_matrix_xz(S));
    json j;
    j["n"] = b.n;
    j["reduced"] = is_reduced(b);
    std::ostringstream text;
    json rows = json::array();
    for (unsigned i = 0; i < b.n; ++i) {
      json row = json::array();
      for (unsigned k = 0; k < b.n; ++k) {
        std::string s = P.at(i, k).str(S.alg);
        row.push_back(s);
        text << (k ? "\t" : "") << s;
      }
      text << "\n";
      rows.push_back(row);
    }
    j["matrix"] = rows;
    emit(as_json, j, text.str());
  });

  // bruhat
  unsigned br_n = 2;
  long long br_q = 2;
  std::string br_matrix;
  auto* br = app.add_subcommand("bruhat", "locate a matrix in its cell, or verify the partition");
  br->add_option("--n", br_n, "matrix size")->required();
  br->add_option("--q", br_q, "field size")->required();
  br->add_option("--matrix", br_matrix, "row-major entries; omit to verify the partition");
  br->callback([&]() {
    json j;
    std::ostringstream text;
    if (br_matrix.empty()) {
      BruhatReport r = verify_bruhat_partition(br_n, br_q);
      j["gl_order"] = r.gl;
      j["total"] = r.total;
      j["ok"] = r.ok();
      for (const auto& [pi, sz] : r.cell_sizes) {
        std::string key;
        for (int v : pi) key += (key.empty() ? "" : ",") + std::to_string(v + 1);
        j["cells"][key] = sz;
        text << "cell (" << key << "): " << sz << "\n";
      }
      text << "total " << r.total << " of |GL| = " << r.gl
           << (r.ok() ? " (partition verified)\n" : " (PARTITION FAILED)\n");
      if (!r.ok()) rc = 1;
    } else {
      const Field& F = Field::get(br_q);
      Mat A = parse_mat(br_matrix, br_n);
      if (!mat_invertible(F, A)) throw CLI::ValidationError("--matrix", "matrix is singular");
      BruhatCell cell = bruhat_reduce(F, A);
      std::string key;
      for (int v : cell.pi) key += (key.empty() ? "" : " ") + std::to_string(v + 1);
      j["permutation"] = key;
      text << "cell (" << key << ")\n";
    }
    emit(as_json, j, text.str());
  });

  // count-reps
  std::string cr_knot, cr_degrees, cr_d, cr_target;
  long long cr_q = 2;
  int cr_m = 0;
  bool cr_reduced = false;
  auto* cr = app.add_subcommand("count-reps", "graded representation counts on a target cell");
  cr->add_option("--knot", cr_knot, "builtin name or .dga file")->required();
  cr->add_option("--degrees", cr_degrees, "degrees of the basis, comma separated")->required();
  cr->add_option("--q", cr_q, "field size")->required();
  cr->add_option("--m", cr_m, "grading modulus");
  cr->add_option("--d", cr_d, "differential entries, row major (default 0)");
  cr->add_option("--target", cr_target, "braid word whose path subset constrains f(t)");
  cr->add_flag("--reduced", cr_reduced, "also print normalized and reduced numbers");
  cr->callback([&]() {
    Dga K = load_knot(cr_knot);
    GradedVS V{parse_ints(cr_degrees), cr_q};
    unsigned dim = V.dim();
    RepProblem P{K, V, cr_d.empty() ? Mat(dim, dim) : parse_mat(cr_d, dim), cr_m, {}};
    if (cr_target.empty())
      P.targets.assign(K.components.size(), Target::units());
    else
      P.targets.assign(K.components.size(),
                       Target::from_pathset(PathSubsetSpec(
                           parse_braid(cr_target, dim), std::vector<int>(dim, 0), cr_m, cr_q)));
    unsigned long long count = count_reps(P, count_opt());
    json j;
    j["count"] = count;
    std::ostringstream text;
    text << "count " << count << "\n";
    if (cr_reduced) {
      SqrtQ rn = rep_number(P, count_opt()), rr = reduced_rep_number(P, count_opt());
      j["rep_number"] = sqrtq_json(rn);
      j["reduced_rep_number"] = sqrtq_json(rr);
      text << "rep_number " << sqrtq_str(rn) << "\nreduced " << sqrtq_str(rr) << "\n";
    }
    emit(as_json, j, text.str());
  });

  // count-augs
  std::string ca_knot, ca_satellite, ca_mu;
  long long ca_q = 2;
  int ca_m = 0;
  auto* ca = app.add_subcommand("count-augs", "augmentation counts, optionally of a satellite");
  ca->add_option("--knot", ca_knot, "builtin name or .dga file")->required();
  ca->add_option("--satellite", ca_satellite, "pattern braid word (omit for the knot itself)");
  ca->add_option("--mu", ca_mu, "pattern Maslov potentials");
  ca->add_option("--m", ca_m, "grading modulus");
  ca->add_option("--q", ca_q, "field size")->required();
  ca->callback([&]() {
    Dga K = load_knot(ca_knot);
    Dga target = K;
    if (!ca_satellite.empty()) {
      auto mu = parse_ints(ca_mu.empty() ? "0,0" : ca_mu);
      target = build_satellite(K, parse_braid(ca_satellite, static_cast<unsigned>(mu.size())),
                               mu)
                   .dga;
    }
    unsigned long long count = count_augs(target, ca_m, ca_q, count_opt());
    SqrtQ an = aug_number(target, ca_m, ca_q, count_opt());
    json j;
    j["count"] = count;
    j["aug_number"] = sqrtq_json(an);
    std::ostringstream text;
    text << "count " << count << "\naug_number " << sqrtq_str(an) << "\n";
    emit(as_json, j, text.str());
  });

  // satellite
  std::string sa_knot, sa_braid, sa_mu;
  auto* sa = app.add_subcommand("satellite", "print the satellite presentation");
  sa->add_option("--knot", sa_knot, "builtin name or .dga file")->required();
  sa->add_option("--braid", sa_braid, "pattern braid word")->required();
  sa->add_option("--mu", sa_mu, "pattern Maslov potentials")->required();
  sa->callback([&]() {
    auto mu = parse_ints(sa_mu);
    Satellite T = build_satellite(load_knot(sa_knot),
                                  parse_braid(sa_braid, static_cast<unsigned>(mu.size())), mu);
    std::string text = serialize_dga(T.dga);
    json j;
    j["dga"] = text;
    j["generators"] = T.dga.chord_ids().size();
    emit(as_json, j, text);
  });

  // theorem-a
  std::string ta_knot, ta_braid, ta_mu;
  int ta_m = 0;
  long long ta_q = 2;
  auto* ta = app.add_subcommand("theorem-a",
                                "compare the satellite and representation counts");
  ta->add_option("--knot", ta_knot)->required();
  ta->add_option("--braid", ta_braid)->required();
  ta->add_option("--mu", ta_mu)->required();
  ta->add_option("--m", ta_m);
  ta->add_option("--q", ta_q)->required();
  ta->callback([&]() {
    auto mu = parse_ints(ta_mu);
    auto r = theorem_A_check(load_knot(ta_knot),
                             parse_braid(ta_braid, static_cast<unsigned>(mu.size())), mu, ta_m,
                             ta_q, count_opt());
    json j;
    j["satellite_side"] = sqrtq_json(r.lhs);
    j["representation_side"] = sqrtq_json(r.rhs);
    j["equal"] = r.equal;
    std::ostringstream text;
    text << "satellite side       " << sqrtq_str(r.lhs) << "\nrepresentation side  "
         << sqrtq_str(r.rhs) << "\n" << (r.equal ? "EQUAL" : "MISMATCH") << "\n";
    emit(as_json, j, text.str());
    if (!r.equal) rc = 1;
  });

  // ruling-interp
  std::string ri_knot, ri_braid, ri_mu, ri_qs = "2,3,4,5,7,8,9", ri_window = "-2,6";
  int ri_m = 0;
  auto* ri = app.add_subcommand("ruling-interp",
                                "recover the ruling polynomial from satellite counts");
  ri->add_option("--knot", ri_knot)->required();
  ri->add_option("--braid", ri_braid)->required();
  ri->add_option("--mu", ri_mu)->required();
  ri->add_option("--m", ri_m);
  ri->add_option("--qs", ri_qs, "field sizes to sample");
  ri->add_option("--window", ri_window, "min,max exponents of z");
  ri->callback([&]() {
    auto mu = parse_ints(ri_mu);
    auto window = parse_ints(ri_window);
    if (window.size() != 2) throw CLI::ValidationError("--window", "expected min,max");
    Satellite T = build_satellite(load_knot(ri_knot),
                                  parse_braid(ri_braid, static_cast<unsigned>(mu.size())), mu);
    std::vector<std::pair<long long, SqrtQ>> vals;
    for (long long q : parse_lls(ri_qs))
      vals.emplace_back(q, aug_number(T.dga, ri_m, q, count_opt()));
    LaurentZ R = interpolate_ruling(vals, window[0], window[1]);
    json j;
    for (const auto& [e, v] : R.c) j["coefficients"][std::to_string(e)] = rat_str(v);
    j["polynomial"] = R.str();
    emit(as_json, j, R.str() + "\n");
  });

  // colored-ruling
  std::string co_knot, co_route = "both";
  unsigned co_n = 2;
  int co_m = 0;
  long long co_q = 2;
  auto* co = app.add_subcommand("colored-ruling", "n-colored ruling polynomial value");
  co->add_option("--knot", co_knot)->required();
  co->add_option("--n", co_n, "number of colors")->required();
  co->add_option("--m", co_m);
  co->add_option("--q", co_q)->required();
  co->add_option("--route", co_route)->check(CLI::IsMember({"satellite", "representation", "both"}));
  co->callback([&]() {
    ColoredRoute route = co_route == "satellite"      ? ColoredRoute::Satellite
                         : co_route == "representation" ? ColoredRoute::Representation
                                                        : ColoredRoute::Both;
    auto v = colored_ruling(load_knot(co_knot), co_n, co_m, co_q, route, count_opt());
    json j;
    j["value"] = sqrtq_json(v.value);
    std::ostringstream text;
    text << "value " << sqrtq_str(v.value) << "\n";
    for (const auto& [perm, val] : v.by_braid) {
      std::string key;
      for (int x : perm) key += (key.empty() ? "" : " ") + std::to_string(x + 1);
      j["by_permutation"][key] = sqrtq_json(val);
      text << "  (" << key << ")  " << sqrtq_str(val) << "\n";
    }
    emit(as_json, j, text.str());
  });

  // homfly-compare
  std::string hc_poly, hc_knot, hc_qs = "2,3,4,5";
  unsigned hc_n = 2;
  long long hc_rot = 0;
  std::optional<long long> hc_tb;
  auto* hc = app.add_subcommand("homfly-compare",
                                "stored colored polynomial vs representation counts");
  hc->add_option("--poly", hc_poly, "polynomial data file")->required();
  hc->add_option("--knot", hc_knot)->required();
  hc->add_option("--n", hc_n)->required();
  hc->add_option("--qs", hc_qs);
  hc->add_option("--tb", hc_tb, "Thurston-Bennequin number for the degree bounds");
  hc->add_option("--rotation", hc_rot, "rotation number (default 0)");
  hc->callback([&]() {
    std::ifstream in(hc_poly);
    if (!in.good()) throw CLI::ValidationError("--poly", "cannot open " + hc_poly);
    PolyFile f = parse_poly_file(in);
    auto rep = compare_with_rep(f.poly, load_knot(hc_knot), hc_n, parse_lls(hc_qs),
                                count_opt());
    auto bounds = check_degree_bounds(f.poly, KnotMeta{hc_tb, hc_rot}, hc_n);
    json j;
    std::ostringstream text;
    j["deg_a"] = bounds.deg_a;
    j["deg_bound_ok"] = bounds.spec_bound_ok;
    text << "deg_a " << bounds.deg_a << " (bound " << bounds.spec_bound << ": "
         << (bounds.spec_bound_ok ? "ok" : "VIOLATED") << ")\n";
    if (bounds.phat_deg_a) {
      j["framing_independent_deg_a"] = *bounds.phat_deg_a;
      j["tb_bound_ok"] = *bounds.tb_bound_ok;
      j["tb_bound_sharp"] = *bounds.sharp;
      text << "framing-independent deg_a " << *bounds.phat_deg_a << ", tb bound "
           << (*bounds.tb_bound_ok ? "ok" : "VIOLATED") << ", sharp "
           << (*bounds.sharp ? "yes" : "no") << "\n";
    }
    for (const auto& row : rep.rows) {
      json r;
      r["q"] = row.q;
      r["specialization"] = sqrtq_json(row.specialization);
      r["rep_count"] = sqrtq_json(row.rep_count);
      r["equal"] = row.equal;
      j["rows"].push_back(r);
      text << "q=" << row.q << "  specialization " << sqrtq_str(row.specialization)
           << "  rep " << sqrtq_str(row.rep_count) << "  "
           << (row.equal ? "EQUAL" : "MISMATCH") << "\n";
    }
    j["all_equal"] = rep.all_equal;
    emit(as_json, j, text.str());
    if (!rep.all_equal || !bounds.spec_bound_ok) rc = 1;
  });

  // verify
  std::string vf_suite = "paper", vf_data = "data";
  auto* vf = app.add_subcommand("verify", "run the acceptance criteria");
  vf->add_option("--suite", vf_suite)->check(CLI::IsMember({"paper"}));
  vf->add_option("--data", vf_data, "directory with the polynomial data files");
  vf->callback([&]() {
    VerifyOptions opt;
    opt.data_dir = vf_data;
    opt.count.threads = threads;
    json rows = json::array();
    if (!as_json)
      opt.on_result = [](const CriterionResult& r) {
        std::printf("criterion %2d %s %-44s (%.1fs)%s%s\n", r.id, r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.seconds, r.detail.empty() ? "" : " -- ",
                    r.detail.c_str());
        std::fflush(stdout);
      };
    auto results = run_acceptance(opt);
    int failed = 0;
    for (const auto& r : results) {
      failed += r.pass ? 0 : 1;
      json row;
      row["id"] = r.id;
      row["name"] = r.name;
      row["pass"] = r.pass;
      row["detail"] = r.detail;
      row["seconds"] = r.seconds;
      rows.push_back(row);
    }
    if (as_json) {
      json j;
      j["criteria"] = rows;
      j["passed"] = static_cast<int>(results.size()) - failed;
      j["failed"] = failed;
      std::cout << j.dump(2) << "\n";
    } else {
      std::printf("%d/%d criteria passed\n", static_cast<int>(results.size()) - failed,
                  static_cast<int>(results.size()));
    }
    if (failed) rc = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
