#pragma once

// JSON conversions for specs, observables and formal sums. Uses nlohmann/json.

#include "modgauss/cumulants.hpp"

#include "json.hpp"

#include <string>

namespace modgauss::io {

using modgauss::to_string;

using json = nlohmann::json;

inline Rational rational_of(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
    throw std::invalid_argument("expected a number or a \"p/q\" string");
}

inline std::vector<Rational> rationals_of(const json& j) {
    std::vector<Rational> v;
    for (const auto& x : j) v.push_back(rational_of(x));
    return v;
}

template <class Key>
json to_json(const FormalSum<Key>& s) {
    json j = json::object();
    for (const auto& [k, c] : s) j[to_string(k)] = to_string(c);
    return j;
}

inline GraphonSpec graphon_of(const json& j) {
    const std::string v = j.at("variant");
    if (v == "constant") return GraphonSpec::constant(rational_of(j.at("p")));
    if (v == "product") return GraphonSpec::product();
    if (v == "mean") return GraphonSpec::mean();
    if (v == "step") {
        std::vector<std::vector<Rational>> values;
        for (const auto& row : j.at("values")) values.push_back(rationals_of(row));
        return GraphonSpec::step(rationals_of(j.at("masses")), values);
    }
    if (v == "grid") {
        auto g = j.at("values").get<std::vector<std::vector<double>>>();
        return GraphonSpec::grid_values(g, j.value("interpolation", std::string("constant")) == "bilinear");
    }
    if (v == "graph") return embed_graph(parse_graph(j.at("graph")));
    throw std::invalid_argument("unknown graphon variant '" + v + "'");
}

inline PermutonSpec permuton_of(const json& j) {
    const std::string v = j.at("variant");
    if (v == "uniform") return PermutonSpec::uniform();
    if (v == "disc") return PermutonSpec::disc();
    if (v == "from_permutation") return PermutonSpec::from_permutation(parse_permutation(j.at("sigma")));
    if (v == "grid") {
        std::vector<std::vector<Rational>> m;
        for (const auto& row : j.at("masses")) m.push_back(rationals_of(row));
        return PermutonSpec::grid_density(m);
    }
    throw std::invalid_argument("unknown permuton variant '" + v + "'");
}

inline ThomaParameter thoma_of(const json& j) {
    if (j.value("variant", std::string()) == "plancherel") return ThomaParameter::plancherel();
    if (j.contains("partition")) return embed_partition(parse_partition(j.at("partition")));
    return ThomaParameter(rationals_of(j.value("alpha", json::array())), rationals_of(j.value("beta", json::array())));
}

inline ModelSpec model_of(const json& j) {
    const std::string f = j.at("family");
    if (f == "graphon") return graphon_of(j);
    if (f == "permuton") return permuton_of(j);
    if (f == "thoma") return thoma_of(j);
    throw std::invalid_argument("unknown model family '" + f + "'");
}

inline json to_json(const ModelSpec& m) {
    json j;
    if (const auto* g = std::get_if<GraphonSpec>(&m)) {
        j["family"] = "graphon";
        switch (g->kind) {
            case GraphonSpec::Kind::Constant: j["variant"] = "constant", j["p"] = to_string(g->p); break;
            case GraphonSpec::Kind::Product: j["variant"] = "product"; break;
            case GraphonSpec::Kind::Mean: j["variant"] = "mean"; break;
            case GraphonSpec::Kind::Step: {
                j["variant"] = "step";
                for (const auto& x : g->masses) j["masses"].push_back(to_string(x));
                for (const auto& row : g->values) {
                    json r = json::array();
                    for (const auto& x : row) r.push_back(to_string(x));
                    j["values"].push_back(r);
                }
                break;
            }
            case GraphonSpec::Kind::Grid:
                j["variant"] = "grid", j["values"] = g->grid;
                j["interpolation"] = g->bilinear ? "bilinear" : "constant";
                break;
        }
    } else if (const auto* p = std::get_if<PermutonSpec>(&m)) {
        j["family"] = "permuton";
        switch (p->kind) {
            case PermutonSpec::Kind::Uniform: j["variant"] = "uniform"; break;
            case PermutonSpec::Kind::Disc: j["variant"] = "disc"; break;
            case PermutonSpec::Kind::FromPermutation:
                j["variant"] = "from_permutation", j["sigma"] = to_string(p->sigma);
                break;
            case PermutonSpec::Kind::Grid:
                j["variant"] = "grid";
                for (const auto& row : p->cell) {
                    json r = json::array();
                    for (const auto& x : row) r.push_back(to_string(x));
                    j["masses"].push_back(r);
                }
                break;
        }
    } else {
        const auto& w = std::get<ThomaParameter>(m);
        j["family"] = "thoma";
        j["alpha"] = json::array();
        j["beta"] = json::array();
        for (const auto& a : w.alpha) j["alpha"].push_back(to_string(a));
        for (const auto& b : w.beta) j["beta"].push_back(to_string(b));
        j["gamma"] = to_string(w.gamma());
    }
    return j;
}

inline Basis basis_of(const std::string& family, const std::string& text) {
    if (family == "graph") {
        if (text == "K2") return complete_graph(2);
        if (text == "K3") return complete_graph(3);
        if (text == "P3") return path_graph(3);
        return parse_graph(text);
    }
    if (family == "permutation") return parse_permutation(text);
    if (family == "partition") return parse_partition(text);
    throw std::invalid_argument("unknown observable family '" + family + "'");
}

inline std::string to_string(const Basis& b) {
    return std::visit([](const auto& x) { return modgauss::to_string(x); }, b);
}

inline Observable observable_of_basis(const Basis& b) {
    switch (b.index()) {
        case 0: return GraphSum(graph_canonical(std::get<Graph>(b)));
        case 1: return PermSum(std::get<Permutation>(b));
        default: return PartSum(std::get<Partition>(b));
    }
}

// {"family": ..., "value": "..."} or {"family": ..., "sum": {"key": "coef"}}
inline Observable observable_of(const json& j) {
    const std::string f = j.at("family");
    if (!j.contains("sum")) return observable_of_basis(basis_of(f, j.at("value")));
    if (f == "graph") {
        GraphSum s;
        for (const auto& [k, c] : j.at("sum").items()) s.add(graph_canonical(parse_graph(k)), rational_of(c));
        return s;
    }
    if (f == "permutation") {
        PermSum s;
        for (const auto& [k, c] : j.at("sum").items()) s.add(parse_permutation(k), rational_of(c));
        return s;
    }
    if (f == "partition") {
        PartSum s;
        for (const auto& [k, c] : j.at("sum").items()) s.add(parse_partition(k), rational_of(c));
        return s;
    }
    throw std::invalid_argument("unknown observable family '" + f + "'");
}

inline json to_json(const Observable& o) {
    return std::visit([](const auto& s) { return to_json(s); }, o);
}

inline json to_json(const CumulantRegime& g) {
    return {{"D", to_string(g.D)}, {"N", to_string(g.N)}, {"A", to_string(g.A)}, {"n", g.n}, {"k", g.k}};
}

inline json to_json(const CumulantReport& r) {
    json j;
    j["mode"] = r.exact_mode ? "exact" : "monte-carlo";
    j["kappa"] = r.kappa;
    if (r.exact_mode) {
        j["kappa_exact"] = json::array();
        for (const auto& x : r.exact) j["kappa_exact"].push_back(to_string(x));
    } else {
        j["stderr"] = r.stderr_;
        j["reps"] = r.reps;
        j["seed"] = r.seed;
    }
    j["regime"] = to_json(r.regime);
    j["sigma2_n"] = r.sigma2_n;
    j["L_n"] = r.L_n;
    j["limits"] = {{"sigma2", r.sigma2 ? json(*r.sigma2) : json(nullptr)}, {"L", r.L ? json(*r.L) : json(nullptr)}};
    return j;
}

}  // namespace modgauss::io
