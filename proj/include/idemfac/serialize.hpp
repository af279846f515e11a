#pragma once

#include <cctype>
#include <string>

#include <json.hpp>

#include "decision.hpp"

namespace idemfac {

using json = nlohmann::ordered_json;

/// Integers are written as JSON numbers when they fit in 64 bits and as
/// decimal strings otherwise; both forms are accepted on input.
inline json integer_to_json(const Integer& v)
{
    if (fits_int64(v)) return json(v.convert_to<std::int64_t>());
    return json(to_string(v));
}

inline Integer parse_integer(const std::string& s)
{
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) throw error(errc::malformed_input, "'" + s + "' is not an integer");
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw error(errc::malformed_input, "'" + s + "' is not an integer");
    return Integer(s[0] == '+' ? s.substr(1) : s);
}

inline Integer integer_from_json(const json& j)
{
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
        return Integer(j.get<std::int64_t>());
    }
    if (j.is_string()) return parse_integer(j.get<std::string>());
    throw error(errc::malformed_input, "expected an integer, got " + j.dump());
}

inline json elem_to_json(const QuadInt& a)
{
    return json::array({integer_to_json(a.x()), integer_to_json(a.y()), a.den()});
}

inline QuadInt elem_from_json(const RingContext& ctx, const json& j)
{
    if (!j.is_array() || j.size() != 3) throw error(errc::malformed_input, "element must be [x, y, den], got " + j.dump());
    Integer den = integer_from_json(j[2]);
    if (den != 1 && den != 2) throw error(errc::malformed_input, "den must be 1 or 2, got " + to_string(den));
    return QuadInt::make(ctx, integer_from_json(j[0]), integer_from_json(j[1]), den == 1 ? 1 : 2);
}

inline json matrix_to_json(const Mat2<QuadInt>& m)
{
    return json::array({json::array({elem_to_json(m(0, 0)), elem_to_json(m(0, 1))}),
                        json::array({elem_to_json(m(1, 0)), elem_to_json(m(1, 1))})});
}

inline Mat2<QuadInt> matrix_from_json(const RingContext& ctx, const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2)
        throw error(errc::malformed_input, "matrix must be [[e00, e01], [e10, e11]]");
    return Mat2<QuadInt>(elem_from_json(ctx, j[0][0]), elem_from_json(ctx, j[0][1]), elem_from_json(ctx, j[1][0]),
                         elem_from_json(ctx, j[1][1]));
}

inline json certificate_to_json(const Certificate& c)
{
    json params = json::object();
    for (const auto& [k, v] : c.params) params[k] = integer_to_json(v);
    return json{{"D", integer_to_json(c.target.context().D())},
                {"p", integer_to_json(c.target.p)},
                {"z", elem_to_json(c.target.z)},
                {"k", integer_to_json(c.target.k)},
                {"B", matrix_to_json(c.B)},
                {"C", matrix_to_json(c.C)},
                {"method", method_name(c.method)},
                {"params", params}};
}

inline const json& require_key(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw error(errc::malformed_input, std::string("missing key '") + key + "'");
    return j.at(key);
}

inline Certificate certificate_from_json(const json& j)
{
    RingContext ctx = make_context(integer_from_json(require_key(j, "D")));
    Integer p = integer_from_json(require_key(j, "p"));
    QuadInt z = elem_from_json(ctx, require_key(j, "z"));
    MatrixA t = build_matrix(p, z);
    if (j.contains("k") && integer_from_json(j.at("k")) != t.k)
        throw error(errc::malformed_input, "k = " + j.at("k").dump() + " does not equal norm(z)/p = " + to_string(t.k));
    Certificate c{t, matrix_from_json(ctx, require_key(j, "B")), matrix_from_json(ctx, require_key(j, "C")), Method::external, {}};
    if (j.contains("method")) c.method = method_from_name(j.at("method").get<std::string>());
    if (j.contains("params")) {
        const json& ps = j.at("params");
        if (!ps.is_object()) throw error(errc::malformed_input, "params must be an object");
        for (const auto& [k, v] : ps.items()) c.params[k] = integer_from_json(v);
    }
    return c;
}

inline json class_to_json(const PellSolutionClass& c)
{
    return json{{"rep", json::array({integer_to_json(c.rep.x), integer_to_json(c.rep.y)})}, {"unit", elem_to_json(c.unit)}};
}

inline json verdict_to_json(const MatrixA& t, const Verdict& v)
{
    json ev = json::object();
    ev["rule"] = v.evidence.rule;
    for (const auto& [k, val] : v.evidence.facts) ev[k] = val;
    if (v.evidence.kronecker) ev["kronecker"] = *v.evidence.kronecker;
    if (v.evidence.form) {
        const auto& f = *v.evidence.form;
        ev["pell_form"] = json{{"D", integer_to_json(f.pell_D)},
                               {"N", integer_to_json(f.pell_N)},
                               {"X", json::array({integer_to_json(f.X.scale), integer_to_json(f.X.offset)})},
                               {"Y", json::array({integer_to_json(f.Y.scale), integer_to_json(f.Y.offset)})}};
    }
    if (!v.evidence.classes.empty()) {
        json cls = json::array();
        for (const auto& c : v.evidence.classes) cls.push_back(class_to_json(c));
        ev["classes"] = cls;
    }
    json out{{"D", integer_to_json(t.context().D())},
             {"p", integer_to_json(t.p)},
             {"z", elem_to_json(t.z)},
             {"k", integer_to_json(t.k)},
             {"status", status_name(v.status)},
             {"evidence", ev}};
    out["certificate"] = v.certificate ? certificate_to_json(*v.certificate) : json(nullptr);
    return out;
}

} // namespace idemfac
