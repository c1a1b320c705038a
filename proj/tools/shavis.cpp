// shavis: exact-arithmetic elliptic curve toolkit and Sha[3]-nontriviality
// certification pipeline.  See README.md for the command reference.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shavis/bsd.hpp"
#include "shavis/certify.hpp"
#include "shavis/congruence.hpp"
#include "shavis/heights.hpp"
#include "shavis/isogeny_gate.hpp"
#include "shavis/local_torsion.hpp"
#include "shavis/tate.hpp"
#include "shavis/twist_search.hpp"
#include "shavis/weierstrass.hpp"

using namespace shavis;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotEstablished = 2;

std::string g_db_path = "data/curves.jsonl";

CurveRecord resolve(const std::string& spec) {
    std::string t = spec;
    t.erase(0, t.find_first_not_of(" \t"));
    if (!t.empty() && t[0] == '[') {
        CurveRecord r;
        r.label = "(literal)";
        r.model = parse_curve_literal(t);
        return r;
    }
    return resolve_curve(spec, ingest_file(g_db_path));
}

std::vector<CurvePoint> load_points(const std::string& path, const WeierstrassModel& E) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open points file '" + path + "'");
    std::vector<CurvePoint> pts;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string xs, ys;
        if (!(ss >> xs)) continue;  // blank line
        if (!(ss >> ys))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'x y' rational pair");
        CurvePoint P(parse_rational(xs), parse_rational(ys));
        if (!on_curve(E, P))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": point " + P.str() +
                                     " is not on the curve");
        pts.push_back(P);
    }
    return pts;
}

void print_local_line(const LocalData& L) {
    std::cout << L.p.get_str() << " " << L.kodaira.str() << " " << L.tamagawa << " "
              << L.conductor_exponent << " " << L.v_min_disc << "\n";
}

int cmd_localdata(const std::string& curve, std::optional<long> prime, bool all_bad) {
    WeierstrassModel E = resolve(curve).model;
    if (prime) {
        print_local_line(tate_algorithm(E, Int(*prime)));
        return kExitOk;
    }
    GlobalMinimalResult gm = global_minimal_model(E);
    for (const Int& p : discriminant_primes(gm.model)) {
        LocalData L = tate_algorithm(gm.model, p);
        if (all_bad && L.reduction_class == ReductionClass::good) continue;
        print_local_line(L);
    }
    return kExitOk;
}

int cmd_local_torsion(const std::string& curve, long ell, const std::string& method,
                      long precision) {
    WeierstrassModel E = resolve(curve).model;
    LocalTorsionReport R;
    if (method == "divpoly")
        R = torsion_by_division_poly_adaptive(E, ell, precision);
    else if (method == "criterion")
        R = formal_group_criterion(E, ell);
    else
        R = combined_local_torsion(E, ell, precision);
    std::cout << "method: " << R.method << "\n";
    if (R.torsion_trivial)
        std::cout << "E(Q_" << ell << ")[" << ell << "] "
                  << (*R.torsion_trivial ? "= 0" : "!= 0") << "\n";
    if (R.e0_torsion_trivial)
        std::cout << "E_0(Q_" << ell << ")[" << ell << "] "
                  << (*R.e0_torsion_trivial ? "= 0" : "!= 0") << "\n";
    std::cout << "details: " << R.details << "\n";
    return kExitOk;
}

int cmd_congruence(const std::string& curveE, const std::string& curveF, long ell,
                   const std::string& bound) {
    WeierstrassModel E = resolve(curveE).model, F = resolve(curveF).model;
    CongruenceVerdict v;
    if (bound == "auto") {
        v = congruence_verdict(E, F, Int(ell));
    } else {
        long B = std::stol(bound);
        QExpansion fe = q_expansion(E, B), ff = q_expansion(F, B);
        v.ell = ell;
        v.bound = B;
        v.index = sturm_bound(conductor(E), 2).index;
        v.congruent = true;
        for (long n = 1; n <= B; ++n)
            if (mod_pos(Int(fe.coeff(n) - ff.coeff(n)), Int(ell)) != 0) {
                v.congruent = false;
                v.first_failure = n;
                break;
            }
    }
    std::cout << "level index: " << v.index.get_str() << "\n";
    std::cout << "bound: " << v.bound << "\n";
    long show = std::min<long>(v.bound, 20);
    QExpansion fe = q_expansion(E, show), ff = q_expansion(F, show);
    std::cout << "a_n(E):";
    for (long n = 1; n <= show; ++n) std::cout << " " << fe.coeff(n);
    std::cout << "\na_n(F):";
    for (long n = 1; n <= show; ++n) std::cout << " " << ff.coeff(n);
    std::cout << "\nverdict: "
              << (v.congruent ? "congruent mod " + std::to_string(ell)
                              : "NOT congruent mod " + std::to_string(ell) +
                                    " (first failure at n = " +
                                    std::to_string(v.first_failure.value_or(-1)) + ")")
              << "\n";
    return kExitOk;
}

int cmd_isogeny_gate(const std::string& curve, long ell, bool emit_poly) {
    WeierstrassModel E = resolve(curve).model;
    IsogenyGateVerdict g = rational_isogeny_gate(E, ell);
    std::cout << "j = " << to_string(g.j) << "\n";
    if (emit_poly) {
        IntPolynomial q = modular_poly_specialize(ell, g.j);
        std::cout << "Phi_" << ell << "(j, Y) = " << q.str("Y") << "\n";
    }
    if (g.has_rational_isogeny)
        std::cout << "verdict: rational " << ell << "-isogeny exists, j' = "
                  << to_string(*g.rational_root) << "\n";
    else if (g.witness_prime)
        std::cout << "verdict: no rational " << ell << "-isogeny (witness prime "
                  << *g.witness_prime << ")\n";
    else
        std::cout << "verdict: no rational " << ell << "-isogeny (exact rational-root test)\n";
    return kExitOk;
}

int cmd_points_verify(const std::string& curve, const std::string& point) {
    WeierstrassModel E = resolve(curve).model;
    auto comma = point.find(',');
    if (comma == std::string::npos) throw std::runtime_error("--point expects \"x,y\"");
    CurvePoint P(parse_rational(point.substr(0, comma)), parse_rational(point.substr(comma + 1)));
    bool ok = on_curve(E, P);
    std::cout << P.str() << (ok ? " is on " : " is NOT on ") << E.str() << "\n";
    return ok ? kExitOk : kExitNotEstablished;
}

int cmd_rank_bound(const std::string& curve, const std::string& points_file) {
    WeierstrassModel E = resolve(curve).model;
    std::vector<CurvePoint> pts = load_points(points_file, E);
    auto [rank, H] = independence_certificate(E, pts);
    std::cout << "points supplied: " << pts.size() << "\n";
    for (size_t i = 0; i < pts.size(); ++i)
        std::cout << "  h(" << pts[i].str() << ") = " << H.canonical_heights[i] << "\n";
    std::cout << "regulator of supplied points: " << H.regulator << "\n";
    std::cout << "certified rank lower bound: " << rank << "\n";
    return kExitOk;
}

int cmd_bsd_compare(const std::string& a, const std::string& b, std::optional<long> rank_a,
                    std::optional<long> rank_b, const std::string& points_a,
                    const std::string& points_b) {
    WeierstrassModel A = resolve(a).model, B = resolve(b).model;
    std::vector<CurvePoint> pa, pb;
    if (!points_a.empty()) pa = load_points(points_a, A);
    if (!points_b.empty()) pb = load_points(points_b, B);
    BSDRecord ra = bsd_record(A, rank_a, pa);
    BSDRecord rb = bsd_record(B, rank_b, pb);
    ComparisonReport cmp = compare_records(ra, rb);
    for (const auto& f : cmp.fields)
        std::cout << (f.equal ? "  = " : " != ") << f.field << ": " << f.a << " | " << f.b << "\n";
    std::cout << (cmp.all_equal ? "all fields equal" : "fields differ") << "\n";
    auto to_json = [](const BSDRecord& r) {
        ordered_json j;
        j["curve"] = r.curve;
        j["conductor"] = r.conductor.get_str();
        j["minimal_discriminant"] = r.min_disc.get_str();
        j["torsion"] = r.torsion_structure;
        ordered_json tam = ordered_json::object(), kod = ordered_json::object();
        for (auto& [p, c] : r.tamagawa) tam[p.get_str()] = c;
        for (auto& [p, k] : r.kodaira) kod[p.get_str()] = k;
        j["tamagawa"] = tam;
        j["kodaira"] = kod;
        j["real_period"] = r.real_period;
        j["rank"] = r.rank ? ordered_json(*r.rank) : ordered_json(nullptr);
        j["rank_tag"] = r.rank_tag;
        j["regulator"] = r.regulator ? ordered_json(*r.regulator) : ordered_json(nullptr);
        j["regulator_note"] = r.regulator_note;
        j["L_value"] = r.l_value_note;
        j["sha"] = r.sha_note;
        j["j_invariant"] = to_string(r.j_invariant);
        return j;
    };
    ordered_json out;
    out["A"] = to_json(ra);
    out["B"] = to_json(rb);
    out["all_equal"] = cmp.all_equal;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_scan_d(long dmin, long dmax, bool prime, const std::vector<std::string>& congs,
               const std::vector<std::string>& legendres, long coprime) {
    TwistQuery q;
    q.dmin = dmin;
    q.dmax = dmax;
    q.require_prime = prime;
    q.coprime_to = coprime;
    auto split2 = [](const std::string& s, const char* what) {
        auto colon = s.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error(std::string(what) + " expects the form a:b, got '" + s + "'");
        return std::pair<long, long>{std::stol(s.substr(0, colon)), std::stol(s.substr(colon + 1))};
    };
    for (const auto& s : congs) {
        auto [m, r] = split2(s, "--cong");
        q.congruences.push_back({m, {r}});
    }
    for (const auto& s : legendres) {
        auto [p, v] = split2(s, "--legendre");
        q.legendre_conditions.push_back({p, static_cast<int>(v)});
    }
    for (long D : scan(q)) std::cout << D << "\n";
    return kExitOk;
}

int cmd_certify(const std::string& curveE, const std::string& curveF, long D, long ell,
                const std::string& points_file, std::optional<long> assume_rank_E,
                std::optional<long> assume_rank_F, const std::string& out_path) {
    CurveRecord E = resolve(curveE), F = resolve(curveF);
    std::vector<CurvePoint> pts;
    if (!points_file.empty()) pts = load_points(points_file, quadratic_twist(F.model, Int(D)));
    Certificate C = certify(E, F, Int(D), ell, pts, assume_rank_E, assume_rank_F);
    std::string doc = C.serialize();
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write certificate to '" + out_path + "'");
        out << doc;
    }
    std::cout << doc;
    for (const auto& h : C.hypotheses)
        std::cerr << h.id << ": " << h.status << "\n";
    std::cerr << "conclusion: " << C.conclusion << " (" << C.assumption_count
              << " assumption(s))\n";
    return C.established() ? kExitOk : kExitNotEstablished;
}

int cmd_reproduce_tables() {
    TableReport R = reproduce_tables();
    for (const auto& c : R.cells)
        std::cout << (c.match ? "  ok " : "FAIL ") << c.name << ": expected " << c.expected
                  << ", got " << c.actual << "\n";
    std::cout << R.period_note << "\n";
    std::cout << (R.all_match ? "all cells reproduced" : "MISMATCHED CELLS FOUND") << "\n";
    return R.all_match ? kExitOk : kExitNotEstablished;
}

int cmd_ingest(const std::string& path) {
    auto db = ingest_file(path);
    for (const auto& r : db) {
        std::cout << r.label << " " << r.model.str();
        if (r.rank) std::cout << " rank=" << *r.rank;
        if (!r.points.empty()) std::cout << " points=" << r.points.size();
        std::cout << "\n";
    }
    std::cout << db.size() << " record(s) validated\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shavis: exact elliptic-curve local data, congruences, heights, periods, and "
                 "Sha[3]-nontriviality certificates"};
    app.require_subcommand(1);
    app.add_option("--db", g_db_path, "curve database (JSONL)")->capture_default_str();

    // localdata
    std::string ld_curve;
    std::optional<long> ld_prime;
    bool ld_all_bad = false;
    auto* ld = app.add_subcommand("localdata", "Kodaira symbol, Tamagawa number, conductor "
                                               "exponent per prime: 'p kodaira c_p f_p v_p'");
    ld->add_option("curve", ld_curve, "curve label or [a1,a2,a3,a4,a6]")->required();
    ld->add_option("--prime", ld_prime, "single prime");
    ld->add_flag("--all-bad", ld_all_bad, "all bad primes of the minimal model");

    // local-torsion
    std::string lt_curve, lt_method = "both";
    long lt_ell = 3, lt_precision = 12;
    auto* lt = app.add_subcommand("local-torsion", "decide E(Q_l)[l] = 0");
    lt->add_option("curve", lt_curve)->required();
    lt->add_option("--ell", lt_ell, "l in {3,5,7}")->capture_default_str();
    lt->add_option("--method", lt_method, "both|divpoly|criterion")->capture_default_str();
    lt->add_option("--precision", lt_precision, "starting l-adic precision")->capture_default_str();

    // congruence
    std::string cg_E, cg_F, cg_bound = "auto";
    long cg_ell = 3;
    auto* cg = app.add_subcommand("congruence", "mod-l coefficient congruence up to the Sturm bound");
    cg->add_option("curveE", cg_E)->required();
    cg->add_option("curveF", cg_F)->required();
    cg->add_option("--ell", cg_ell)->capture_default_str();
    cg->add_option("--bound", cg_bound, "auto or an explicit bound")->capture_default_str();

    // isogeny-gate
    std::string ig_curve;
    long ig_ell = 3;
    bool ig_emit = false;
    auto* ig = app.add_subcommand("isogeny-gate", "rational l-isogeny test via the modular polynomial");
    ig->add_option("curve", ig_curve)->required();
    ig->add_option("--ell", ig_ell)->capture_default_str();
    ig->add_flag("--emit-poly", ig_emit, "print the specialized polynomial");

    // points verify
    std::string pv_curve, pv_point;
    auto* pts = app.add_subcommand("points", "point utilities");
    auto* pv = pts->add_subcommand("verify", "check a point lies on the curve");
    pv->add_option("curve", pv_curve)->required();
    pv->add_option("--point", pv_point, "\"x,y\" with rational entries")->required();
    pts->require_subcommand(1);

    // rank-bound
    std::string rb_curve, rb_points;
    auto* rb = app.add_subcommand("rank-bound", "certified rank lower bound from points");
    rb->add_option("curve", rb_curve)->required();
    rb->add_option("--points", rb_points, "file of 'x y' rational pairs")->required();

    // bsd-compare
    std::string bc_a, bc_b, bc_pa, bc_pb;
    std::optional<long> bc_ra, bc_rb;
    auto* bc = app.add_subcommand("bsd-compare", "field-by-field BSD-invariant comparison");
    bc->add_option("curveA", bc_a)->required();
    bc->add_option("curveB", bc_b)->required();
    bc->add_option("--rank-a", bc_ra);
    bc->add_option("--rank-b", bc_rb);
    bc->add_option("--points-a", bc_pa);
    bc->add_option("--points-b", bc_pb);

    // scan-d
    long sd_min = 2, sd_max = 0, sd_coprime = 1;
    bool sd_prime = false;
    std::vector<std::string> sd_congs, sd_legendres;
    auto* sd = app.add_subcommand("scan-d", "sieve square-free twist parameters");
    sd->add_option("--min", sd_min)->required();
    sd->add_option("--max", sd_max)->required();
    sd->add_flag("--prime", sd_prime, "require |D| prime");
    sd->add_option("--cong", sd_congs, "congruence m:r (repeatable)");
    sd->add_option("--legendre", sd_legendres, "Legendre condition q:v (repeatable)");
    sd->add_option("--coprime", sd_coprime, "require gcd(D, n) = 1");

    // certify
    std::string cf_E, cf_F, cf_points, cf_out;
    long cf_D = 0, cf_ell = 3;
    std::optional<long> cf_rank_E, cf_rank_F;
    auto* cf = app.add_subcommand("certify", "emit a Sha[l]-nontriviality certificate");
    cf->add_option("--E", cf_E, "curve label or literal")->required();
    cf->add_option("--F", cf_F, "curve label or literal")->required();
    cf->add_option("--D", cf_D, "square-free twist parameter")->required();
    cf->add_option("--ell", cf_ell)->capture_default_str();
    cf->add_option("--points-F", cf_points, "points on F^D, one 'x y' per line");
    cf->add_option("--assume-rank-E", cf_rank_E, "externally asserted rank of E^D");
    cf->add_option("--assume-rank-F", cf_rank_F, "externally asserted rank of F^D");
    cf->add_option("--out", cf_out, "write the certificate JSON here");

    auto* rt = app.add_subcommand("reproduce-tables", "regenerate the published tables and diff");

    std::string in_path;
    auto* in = app.add_subcommand("ingest", "validate a curve database");
    in->add_option("path", in_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ld->parsed()) return cmd_localdata(ld_curve, ld_prime, ld_all_bad);
        if (lt->parsed()) return cmd_local_torsion(lt_curve, lt_ell, lt_method, lt_precision);
        if (cg->parsed()) return cmd_congruence(cg_E, cg_F, cg_ell, cg_bound);
        if (ig->parsed()) return cmd_isogeny_gate(ig_curve, ig_ell, ig_emit);
        if (pts->parsed()) return cmd_points_verify(pv_curve, pv_point);
        if (rb->parsed()) return cmd_rank_bound(rb_curve, rb_points);
        if (bc->parsed())
            return cmd_bsd_compare(bc_a, bc_b, bc_ra, bc_rb, bc_pa, bc_pb);
        if (sd->parsed())
            return cmd_scan_d(sd_min, sd_max, sd_prime, sd_congs, sd_legendres, sd_coprime);
        if (cf->parsed())
            return cmd_certify(cf_E, cf_F, cf_D, cf_ell, cf_points, cf_rank_E, cf_rank_F, cf_out);
        if (rt->parsed()) return cmd_reproduce_tables();
        if (in->parsed()) return cmd_ingest(in_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
