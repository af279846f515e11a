#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "serialize.hpp"

namespace idemfac::cli {

/// Exit codes: verdicts of any kind are results, not failures.
enum exit_code : int {
    ok = 0,
    check_failed = 1, ///< verify rejected a certificate, classify found A(p, z) ill-formed
    invalid_input = 2,
    parse_error = 3,
};

/// "z1,z2[,den]"
inline QuadInt parse_z(const RingContext& ctx, const std::string& s)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 2 && parts.size() != 3) throw error(errc::malformed_input, "z must be 'z1,z2[,den]', got '" + s + "'");
    Integer den = parts.size() == 3 ? parse_integer(parts[2]) : Integer(1);
    if (den != 1 && den != 2) throw error(errc::malformed_input, "den must be 1 or 2");
    return QuadInt::make(ctx, parse_integer(parts[0]), parse_integer(parts[1]), den == 1 ? 1 : 2);
}

inline int report_error(const error& e, std::ostream& err)
{
    err << "error: " << e.what() << "\n";
    return e.code() == errc::malformed_input ? parse_error : invalid_input;
}

inline bool write_text_file(const std::string& path, const std::string& text, std::ostream& err)
{
    std::ofstream f(path);
    if (!f) {
        err << "error: cannot write " << path << "\n";
        return false;
    }
    f << text;
    return static_cast<bool>(f);
}

// ---------------------------------------------------------------------------

inline int cmd_ring(const Integer& D, bool as_json, std::ostream& out, std::ostream& err)
{
    try {
        RingContext ctx = make_context(D);
        json j{{"D", integer_to_json(D)},
               {"square_free", true},
               {"d_mod4", ctx.d_mod4()},
               {"half_integers", ctx.half_integers()},
               {"basis", ctx.basis()}};
        if (ctx.real()) {
            QuadInt eps = fundamental_unit(ctx), u = pell_unit(ctx);
            j["fundamental_unit"] = elem_to_json(eps);
            j["fundamental_unit_norm"] = integer_to_json(eps.norm());
            j["pell_unit"] = elem_to_json(u);
            auto cf = sqrt_continued_fraction(D);
            json per = json::array();
            for (const auto& a : cf.period) per.push_back(integer_to_json(a));
            j["continued_fraction"] = json{{"a0", integer_to_json(cf.a0)}, {"period", per}};
            if (!as_json) {
                out << "ring:             Z[√" << D << "], elements " << ctx.basis() << "\n";
                out << "D mod 4:          " << ctx.d_mod4() << "\n";
                out << "fundamental unit: " << eps << " (norm " << eps.norm() << ")\n";
                out << "pell unit:        " << u << " (least unit in Z[√" << D << "] of norm +1)\n";
                out << "√" << D << " = [" << cf.a0 << ";";
                for (std::size_t i = 0; i < cf.period.size(); ++i) out << (i ? "," : " (") << cf.period[i];
                out << ")]\n";
            }
        } else {
            auto tu = torsion_generator(ctx);
            j["torsion_generator"] = elem_to_json(tu.unit);
            j["torsion_order"] = tu.order;
            if (!as_json) {
                out << "ring:             Z[√" << D << "], elements " << ctx.basis() << "\n";
                out << "D mod 4:          " << ctx.d_mod4() << "\n";
                out << "unit group:       finite, generated by " << tu.unit << " of order " << tu.order << "\n";
            }
        }
        if (as_json) out << j.dump(2) << "\n";
        return ok;
    } catch (const error& e) {
        return report_error(e, err);
    }
}

struct Diagnostic {
    errc code;
    std::string message;
};

struct Classification {
    Integer D;
    Integer p;
    QuadInt z;
    std::optional<PrimeStatus> prime;
    std::optional<Integer> k;
    std::optional<bool> in_Ip;
    std::vector<Diagnostic> diagnostics;

    bool well_formed() const { return diagnostics.empty(); }
};

/// Every reason A(p, z) fails to be well-formed, not just the first.
inline Classification classify(const Integer& p, const QuadInt& z)
{
    const RingContext& ctx = z.context();
    Classification c{ctx.D(), p, z, std::nullopt, std::nullopt, std::nullopt, {}};
    Integer n = z.norm();
    if (p != 0 && n % p == 0) c.k = n / p;
    if (!is_prime(p)) {
        c.diagnostics.push_back({errc::not_prime, to_string(p) + " is not a rational prime"});
        return c;
    }
    c.prime = prime_status(p, ctx);
    std::string ring = "Z[√" + to_string(ctx.D()) + "]";
    if (c.prime->prime_in_ring)
        c.diagnostics.push_back({errc::invalid_setting, to_string(p) + " is prime in " + ring + " (inert): invalid setting"});
    else if (!c.prime->irreducible)
        c.diagnostics.push_back({errc::invalid_setting, to_string(p) + " is reducible in " + ring + ": invalid setting"});
    if (z.is_rational_integer())
        c.diagnostics.push_back({errc::invalid_setting, "z = " + z.str() + " is a rational integer, so z ∉ I_p"});
    else if (z.is_unit())
        c.diagnostics.push_back({errc::invalid_setting, "z = " + z.str() + " is a unit, so z ∉ I_p"});
    if (!z.is_zero() && divides(QuadInt::from_integer(ctx, p), z))
        c.diagnostics.push_back({errc::invalid_setting, to_string(p) + " divides z = " + z.str() + ", so z ∉ I_p"});
    if (n % p != 0)
        c.diagnostics.push_back({errc::norm_not_divisible, "p | ‖z‖ is required: " + to_string(p) + " does not divide ‖" +
                                                               z.str() + "‖ = " + to_string(n)});
    if (c.prime->valid_setting) c.in_Ip = in_Ip(z, p);
    return c;
}

inline int cmd_classify(const Integer& D, const Integer& p, const std::string& zs, bool as_json, std::ostream& out,
                        std::ostream& err)
{
    try {
        RingContext ctx = make_context(D);
        QuadInt z = parse_z(ctx, zs);
        Classification c = classify(p, z);
        if (as_json) {
            json j{{"D", integer_to_json(D)}, {"p", integer_to_json(p)}, {"z", elem_to_json(z)}, {"norm", integer_to_json(z.norm())}};
            j["k"] = c.k ? integer_to_json(*c.k) : json(nullptr);
            if (c.prime)
                j["prime_status"] = json{{"splitting", splitting_name(c.prime->splitting)},
                                         {"irreducible", c.prime->irreducible},
                                         {"prime_in_ring", c.prime->prime_in_ring},
                                         {"valid_setting", c.prime->valid_setting}};
            else
                j["prime_status"] = nullptr;
            j["in_Ip"] = c.in_Ip ? json(*c.in_Ip) : json(nullptr);
            j["well_formed"] = c.well_formed();
            json d = json::array();
            for (const auto& x : c.diagnostics) d.push_back(json{{"code", errc_name(x.code)}, {"message", x.message}});
            j["diagnostics"] = d;
            out << j.dump(2) << "\n";
        } else {
            out << "z = " << z << " in Z[√" << D << "], norm " << z.norm();
            if (c.k) out << ", k = " << *c.k;
            out << "\n";
            if (c.prime)
                out << "p = " << p << ": " << splitting_name(c.prime->splitting) << ", "
                    << (c.prime->irreducible ? "irreducible" : "reducible") << ", "
                    << (c.prime->prime_in_ring ? "prime" : "not prime") << ", setting "
                    << (c.prime->valid_setting ? "valid" : "invalid") << "\n";
            if (c.in_Ip) out << "z " << (*c.in_Ip ? "∈" : "∉") << " I_" << p << "(" << D << ")\n";
            for (const auto& x : c.diagnostics) out << errc_name(x.code) << ": " << x.message << "\n";
            out << (c.well_formed() ? "A(p,z) is well-formed\n" : "A(p,z) is not well-formed\n");
        }
        return c.well_formed() ? ok : check_failed;
    } catch (const error& e) {
        return report_error(e, err);
    }
}

inline void print_verdict(const MatrixA& t, const Verdict& v, std::ostream& out)
{
    out << "A(" << t.p << ", " << t.z << ") = " << t.matrix << "\n";
    out << "status: " << status_name(v.status) << "\n";
    out << "rule:   " << v.evidence.rule << "\n";
    for (const auto& [k, val] : v.evidence.facts) out << "  " << k << ": " << val << "\n";
    if (v.evidence.form)
        out << "  pell form: X² - " << v.evidence.form->pell_D << "·Y² = " << v.evidence.form->pell_N << ", X = "
            << v.evidence.form->X.scale << "·b1 + " << v.evidence.form->X.offset << ", Y = " << v.evidence.form->Y.scale
            << "·b2 + " << v.evidence.form->Y.offset << "\n";
    for (const auto& c : v.evidence.classes) out << "  class rep (" << c.rep.x << ", " << c.rep.y << ")\n";
    if (v.certificate) {
        out << "B = " << v.certificate->B << "\n";
        out << "C = " << v.certificate->C << "\n";
        out << "method: " << method_name(v.certificate->method) << "\n";
    }
}

inline int emit_verdict(const MatrixA& t, const Verdict& v, bool as_json, const std::string& cert_path, std::ostream& out,
                        std::ostream& err)
{
    if (as_json)
        out << verdict_to_json(t, v).dump(2) << "\n";
    else
        print_verdict(t, v, out);
    if (!cert_path.empty() && v.certificate) {
        if (!write_text_file(cert_path, certificate_to_json(*v.certificate).dump(2) + "\n", err)) return invalid_input;
        if (!as_json) out << "certificate written to " << cert_path << "\n";
    }
    return ok;
}

inline int cmd_conjecture(const Integer& D, const Integer& p, const std::string& zs, const Integer& m, bool as_json,
                          const std::string& cert_path, std::ostream& out, std::ostream& err)
{
    try {
        RingContext ctx = make_context(D);
        MatrixA t = build_matrix(p, parse_z(ctx, zs));
        Verdict v = decide_conjecture(t);
        if (v.certificate && v.certificate->method == Method::norm_minus_p2 && m != 0) {
            v.certificate = construct_norm_minus_p2(t, m);
            v.evidence.facts = {{"m", to_string(m)}};
        }
        return emit_verdict(t, v, as_json, cert_path, out, err);
    } catch (const error& e) {
        return report_error(e, err);
    }
}

inline int cmd_factor(const Integer& D, const Integer& p, const std::string& zs, const Integer& bound, bool as_json,
                      const std::string& cert_path, std::ostream& out, std::ostream& err)
{
    try {
        RingContext ctx = make_context(D);
        MatrixA t = build_matrix(p, parse_z(ctx, zs));
        return emit_verdict(t, search_two_idempotent(t, bound), as_json, cert_path, out, err);
    } catch (const error& e) {
        return report_error(e, err);
    }
}

inline int verify_json_text(const std::string& text, bool as_json, std::ostream& out, std::ostream& err)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        err << "error: MalformedInput: " << e.what() << "\n";
        return parse_error;
    }
    Certificate cert = [&] {
        try {
            return certificate_from_json(j);
        } catch (const json::exception& e) {
            throw error(errc::malformed_input, e.what());
        }
    }();
    CertificateCheck r = check_certificate(cert);
    std::vector<std::string> failing;
    for (std::size_t i = 0; i < r.relations.holds.size(); ++i)
        if (!r.relations.holds[i]) failing.emplace_back(relation_names[i]);
    if (as_json) {
        json f = json::array();
        for (const auto& s : failing) f.push_back(s);
        out << json{{"pass", r.ok()},
                    {"B_shape", r.B_shape},
                    {"C_shape", r.C_shape},
                    {"B_idempotent", r.B_idempotent},
                    {"C_idempotent", r.C_idempotent},
                    {"product", r.product},
                    {"conjecture_form", r.conjecture_form},
                    {"failing_relations", f}}
                   .dump(2)
            << "\n";
    } else {
        out << "target A(" << cert.target.p << ", " << cert.target.z << ")\n";
        if (!r.B_shape) out << "shape: B is not of the form (a, b; c, 1-a)\n";
        if (!r.C_shape) out << "shape: C is not of the form (d, e; f, 1-d)\n";
        if (!r.B_idempotent) out << "B is not idempotent\n";
        if (!r.C_idempotent) out << "C is not idempotent\n";
        if (!r.product) out << "B·C differs from A(p,z)\n";
        for (const auto& s : failing) out << "relation fails: " << s << "\n";
        out << "conjecture form: " << (r.conjecture_form ? "yes" : "no") << "\n";
        out << (r.ok() ? "PASS" : "FAIL") << "\n";
    }
    return r.ok() ? ok : check_failed;
}

inline int cmd_verify(const std::string& path, bool as_json, std::ostream& out, std::ostream& err)
{
    std::ifstream f(path);
    if (!f) {
        err << "error: cannot read " << path << "\n";
        return parse_error;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return verify_json_text(ss.str(), as_json, out, err);
    } catch (const error& e) {
        return report_error(e, err);
    }
}

inline int cmd_pell(const Integer& D, const Integer& N, bool as_json, std::ostream& out, std::ostream& err)
{
    try {
        auto classes = solve_norm_equation(D, N);
        if (as_json) {
            json cls = json::array();
            for (const auto& c : classes) cls.push_back(class_to_json(c));
            out << json{{"D", integer_to_json(D)}, {"N", integer_to_json(N)}, {"classes", cls}}.dump(2) << "\n";
        } else {
            out << "x² - " << D << "·y² = " << N << ": " << classes.size() << " class" << (classes.size() == 1 ? "" : "es") << "\n";
            for (const auto& c : classes) out << "  (" << c.rep.x << ", " << c.rep.y << ") · ±(" << c.unit << ")^n\n";
        }
        return ok;
    } catch (const error& e) {
        return report_error(e, err);
    }
}

// ---------------------------------------------------------------------------
// Survey.

struct SurveyOptions {
    std::vector<Integer> d_list;
    Integer p_max = 3;
    Integer coord_max = 2;
    int jobs = 1;
    std::string cert_dir; ///< empty: no certificate files
};

struct SurveyRow {
    Integer D, p, z1, z2;
    int den = 1;
    Integer norm, k;
    std::string status, method, certificate_path, error;
};

inline const char* survey_header = "D,p,z1,z2,den,norm,k,status,method,certificate_path,error";

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char ch : s) {
        if (ch == '"') r += '"';
        r += ch;
    }
    return r + "\"";
}

inline std::string to_csv(const SurveyRow& r)
{
    return to_string(r.D) + "," + to_string(r.p) + "," + to_string(r.z1) + "," + to_string(r.z2) + "," + std::to_string(r.den) +
           "," + to_string(r.norm) + "," + to_string(r.k) + "," + r.status + "," + r.method + "," +
           csv_field(r.certificate_path) + "," + csv_field(r.error);
}

inline std::string cert_file_name(const MatrixA& t)
{
    auto num = [](const Integer& v) { return v < 0 ? "m" + to_string(-v) : to_string(v); };
    return "cert_D" + num(t.context().D()) + "_p" + num(t.p) + "_" + num(t.z.x()) + "_" + num(t.z.y()) + "_" +
           std::to_string(t.z.den()) + ".json";
}

/// Well-formed targets in the box, ordered by D (list order), p, den, z1, z2.
inline std::vector<MatrixA> survey_targets(const SurveyOptions& o)
{
    std::vector<MatrixA> out;
    for (const Integer& D : o.d_list) {
        RingContext ctx = make_context(D);
        for (Integer p = 2; p <= o.p_max; ++p) {
            if (!is_prime(p) || !prime_status(p, ctx).valid_setting) continue;
            for (int den : {1, 2}) {
                if (den == 2 && !ctx.half_integers()) continue;
                for (Integer z1 = -o.coord_max; z1 <= o.coord_max; ++z1)
                    for (Integer z2 = -o.coord_max; z2 <= o.coord_max; ++z2) {
                        if (den == 2 && (z1 % 2 == 0 || z2 % 2 == 0)) continue;
                        QuadInt z = QuadInt::make(ctx, z1, z2, den);
                        if (!classify(p, z).well_formed()) continue;
                        out.push_back(build_matrix(p, z));
                    }
            }
        }
    }
    return out;
}

inline SurveyRow survey_one(const MatrixA& t, const std::string& cert_dir)
{
    SurveyRow r{t.context().D(), t.p, t.z.x(), t.z.y(), t.z.den(), t.z.norm(), t.k, "", "", "", ""};
    try {
        Verdict v = decide_conjecture(t);
        r.status = status_name(v.status);
        r.method = v.certificate ? method_name(v.certificate->method) : v.evidence.rule;
        if (v.certificate && !cert_dir.empty()) {
            std::string name = cert_file_name(t);
            std::string path = (std::filesystem::path(cert_dir) / name).string();
            std::ofstream f(path);
            f << certificate_to_json(*v.certificate).dump(2) << "\n";
            if (!f)
                r.error = "cannot write " + path;
            else
                r.certificate_path = path;
        }
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

inline std::vector<SurveyRow> run_survey(const SurveyOptions& o)
{
    auto targets = survey_targets(o);
    if (!o.cert_dir.empty()) std::filesystem::create_directories(o.cert_dir);
    std::vector<SurveyRow> rows(targets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < targets.size();) rows[i] = survey_one(targets[i], o.cert_dir);
    };
    int jobs = std::max(1, o.jobs);
    std::vector<std::thread> pool;
    for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return rows;
}

inline int cmd_survey(const SurveyOptions& o, const std::string& out_path, std::ostream& out, std::ostream& err)
{
    try {
        auto rows = run_survey(o);
        std::string csv = std::string(survey_header) + "\n";
        for (const auto& r : rows) csv += to_csv(r) + "\n";
        if (out_path.empty())
            out << csv;
        else if (!write_text_file(out_path, csv, err))
            return invalid_input;
        return ok;
    } catch (const error& e) {
        return report_error(e, err);
    }
}

} // namespace idemfac::cli
