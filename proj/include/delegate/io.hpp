#pragma once

// JSON serialization. Rationals are written as "num/den" strings so that a
// save/load round trip is exact.

#include "delegate/instance.hpp"

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace delegate {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const json& field(const json& obj, const std::string& name, const std::string& where) {
    if (!obj.is_object()) throw FormatError(where + ": expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) throw FormatError("missing field \"" + name + "\"" + (where.empty() ? "" : " in " + where));
    return *it;
}

inline Rational rational_from(const json& v, const std::string& where) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long>());
    } catch (const RationalParseError& e) {
        throw FormatError("field " + where + ": " + e.what());
    }
    throw FormatError("field " + where + ": expected a rational string such as \"1/2\"");
}

inline json rational_to(const Rational& r) { return format_rational(r); }

inline Vector vector_from(const json& v, std::size_t expect, const std::string& where) {
    if (!v.is_array()) throw FormatError("field " + where + ": expected an array");
    if (expect != SIZE_MAX && v.size() != expect)
        throw FormatError("field " + where + ": expected " + std::to_string(expect) + " entries, got " +
                          std::to_string(v.size()));
    Vector out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational_from(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline json vector_to(const Vector& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(rational_to(r));
    return out;
}

inline std::vector<std::string> ids_from(const json& v, const std::string& where) {
    if (!v.is_array()) throw FormatError("field " + where + ": expected an array of identifiers");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) throw FormatError("field " + where + "[" + std::to_string(i) + "]: expected a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

// Columns given as a list of vectors; result has `rows` rows.
inline Matrix columns_from(const json& v, std::size_t rows, std::size_t cols, const std::string& where) {
    if (!v.is_array() || v.size() != cols)
        throw FormatError("field " + where + ": expected " + std::to_string(cols) + " columns");
    Matrix out(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        Vector col = vector_from(v[c], rows, where + "[" + std::to_string(c) + "]");
        for (std::size_t r = 0; r < rows; ++r) out(r, c) = std::move(col[r]);
    }
    return out;
}

inline json columns_to(const Matrix& m) {
    json out = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(vector_to(m.column(c)));
    return out;
}

inline void check_version(const json& j) {
    const json& v = field(j, "version", "document");
    if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
        throw FormatError("schema version mismatch: expected " + std::to_string(kFormatVersion) + ", got " + v.dump());
}

inline json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw FormatError(e.what());
    }
}

inline std::size_t index_of(const std::vector<std::string>& ids, const std::string& id, const std::string& where) {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return i;
    throw FormatError("field " + where + ": unknown identifier \"" + id + "\"");
}

}  // namespace detail

inline json instance_to_json(const DelegationInstance& inst) {
    json j;
    j["version"] = kFormatVersion;
    j["types"] = inst.types;
    j["type_dist"] = detail::vector_to(inst.type_dist);
    j["outcomes"] = inst.outcomes;
    j["actions"] = inst.actions;
    j["F"] = detail::columns_to(inst.F);
    j["R"] = detail::columns_to(inst.R);
    j["costs"] = detail::vector_to(inst.costs);
    if (inst.bounded_costs) j["bounded_costs"] = true;
    return j;
}

inline DelegationInstance instance_from_json(const json& j) {
    using namespace detail;
    check_version(j);
    DelegationInstance inst;
    inst.types = ids_from(field(j, "types", "instance"), "types");
    inst.outcomes = ids_from(field(j, "outcomes", "instance"), "outcomes");
    inst.actions = ids_from(field(j, "actions", "instance"), "actions");
    const std::size_t n = inst.types.size(), m = inst.outcomes.size(), l = inst.actions.size();
    inst.type_dist = vector_from(field(j, "type_dist", "instance"), n, "type_dist");
    inst.F = columns_from(field(j, "F", "instance"), m, l, "F");
    inst.R = columns_from(field(j, "R", "instance"), m, n, "R");
    inst.costs = vector_from(field(j, "costs", "instance"), l, "costs");
    if (auto it = j.find("bounded_costs"); it != j.end()) inst.bounded_costs = it->get<bool>();
    return inst;
}

inline std::string save_instance(const DelegationInstance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

inline DelegationInstance load_instance(std::string_view text) {
    return instance_from_json(detail::parse_document(text));
}

inline json menu_to_json(const DelegationInstance& inst, const DeterministicMenu& menu) {
    json j;
    j["version"] = kFormatVersion;
    j["kind"] = "deterministic";
    j["menu_kind"] = menu.kind == MenuKind::kDirect ? "direct" : "indirect";
    json schemes = json::array();
    for (const auto& s : menu.schemes) {
        json e;
        if (s.opt_out()) {
            e["action"] = nullptr;
        } else {
            e["action"] = inst.actions.at(s.action);
            e["payments"] = detail::vector_to(s.payments);
        }
        schemes.push_back(std::move(e));
    }
    j["schemes"] = std::move(schemes);
    return j;
}

inline DeterministicMenu menu_from_json(const DelegationInstance& inst, const json& j) {
    using namespace detail;
    check_version(j);
    const json& kind = field(j, "kind", "menu");
    if (kind != "deterministic") throw FormatError("field kind: expected \"deterministic\", got " + kind.dump());
    DeterministicMenu menu;
    if (auto it = j.find("menu_kind"); it != j.end()) {
        if (*it == "direct")
            menu.kind = MenuKind::kDirect;
        else if (*it == "indirect")
            menu.kind = MenuKind::kIndirect;
        else
            throw FormatError("field menu_kind: expected \"direct\" or \"indirect\"");
    }
    const json& schemes = field(j, "schemes", "menu");
    if (!schemes.is_array()) throw FormatError("field schemes: expected an array");
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const std::string where = "schemes[" + std::to_string(i) + "]";
        const json& a = field(schemes[i], "action", where);
        PaymentScheme s;
        if (a.is_null()) {
            s.action = kOptOut;
            s.payments.assign(inst.num_outcomes(), Rational(0));
        } else {
            if (!a.is_string()) throw FormatError("field " + where + ".action: expected a string or null");
            s.action = index_of(inst.actions, a.get<std::string>(), where + ".action");
            s.payments = vector_from(field(schemes[i], "payments", where), inst.num_outcomes(), where + ".payments");
            for (const auto& p : s.payments)
                if (p < 0) throw FormatError("field " + where + ".payments: negative payment");
        }
        menu.schemes.push_back(std::move(s));
    }
    if (menu.kind == MenuKind::kDirect && menu.schemes.size() != inst.num_types())
        throw FormatError("direct menu must have one scheme per type");
    return menu;
}

inline json randomized_menu_to_json(const DelegationInstance& inst, const RandomizedMenu& menu) {
    json j;
    j["version"] = kFormatVersion;
    j["kind"] = "randomized";
    json per_type = json::array();
    for (std::size_t t = 0; t < inst.num_types(); ++t) {
        json e;
        e["type"] = inst.types[t];
        json phi = json::object();
        json pay = json::object();
        for (std::size_t a = 0; a < inst.num_actions(); ++a) {
            phi[inst.actions[a]] = detail::rational_to(menu.phi(t, a));
            pay[inst.actions[a]] = detail::vector_to(menu.payments[t][a]);
        }
        phi["opt_out"] = detail::rational_to(menu.phi(t, menu.opt_out_column()));
        e["phi"] = std::move(phi);
        e["payments"] = std::move(pay);
        per_type.push_back(std::move(e));
    }
    j["schemes"] = std::move(per_type);
    return j;
}

inline RandomizedMenu randomized_menu_from_json(const DelegationInstance& inst, const json& j) {
    using namespace detail;
    check_version(j);
    const json& kind = field(j, "kind", "menu");
    if (kind != "randomized") throw FormatError("field kind: expected \"randomized\", got " + kind.dump());
    const std::size_t n = inst.num_types(), l = inst.num_actions(), m = inst.num_outcomes();
    const json& schemes = field(j, "schemes", "menu");
    if (!schemes.is_array() || schemes.size() != n) throw FormatError("field schemes: expected one entry per type");
    RandomizedMenu menu;
    menu.phi = Matrix(n, l + 1);
    menu.payments.assign(n, std::vector<Vector>(l, Vector(m)));
    for (std::size_t i = 0; i < n; ++i) {
        const std::string where = "schemes[" + std::to_string(i) + "]";
        std::size_t t = index_of(inst.types, field(schemes[i], "type", where).get<std::string>(), where + ".type");
        const json& phi = field(schemes[i], "phi", where);
        const json& pay = field(schemes[i], "payments", where);
        for (std::size_t a = 0; a < l; ++a) {
            const std::string& id = inst.actions[a];
            if (phi.contains(id)) menu.phi(t, a) = rational_from(phi[id], where + ".phi." + id);
            if (pay.contains(id)) menu.payments[t][a] = vector_from(pay[id], m, where + ".payments." + id);
        }
        if (phi.contains("opt_out")) menu.phi(t, l) = rational_from(phi["opt_out"], where + ".phi.opt_out");
    }
    return menu;
}

}  // namespace delegate
