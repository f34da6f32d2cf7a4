#pragma once

// JSON forms of the exact types and of verification reports.
//   QLaurent  {"<exp>": "<int>", ...}
//   XPoly     {nx, terms:[{x:[ints], t:int, coeff:<QLaurent>}]}
//   NCPoly    {terms:[{coeff, m:[ints], a, d}]}
//   UKernel   {arity, terms:[{e:[ints], coeff}]}
//   ShiftOp   {r, terms:[{eps:[ints], num:<XPoly>, den:[{i, j, pow, shift}]}]}
//   CheckReport {suite, params, checks_run, failures:[{id, instantiation, witness}], notes}

#include <string>
#include <vector>

#include <json.hpp>

#include "qq/ctengine.hpp"
#include "qq/ncalgebra.hpp"
#include "qq/qlaurent.hpp"
#include "qq/repdiff.hpp"
#include "qq/verify.hpp"
#include "qq/xpoly.hpp"
#include "qq/xrat.hpp"

namespace qq {

using json = nlohmann::json;

inline void to_json(json &j, const QLaurent &c) {
    j = json::object();
    c.for_each_term([&](int e, const BigInt &v) { j[std::to_string(e)] = v.str(); });
}

inline void from_json(const json &j, QLaurent &c) {
    std::vector<std::pair<int, BigInt>> terms;
    for (const auto &[e, v] : j.items()) {
        terms.emplace_back(std::stoi(e), BigInt(v.get<std::string>()));
    }
    c = QLaurent::from_terms(terms);
}

inline void to_json(json &j, const XPoly &p) {
    json terms = json::array();
    for (const auto &[key, c] : p.grouped()) {
        json t{{"x", key.second}, {"coeff", c}};
        if (key.first != 0) {
            t["t"] = key.first;
        }
        terms.push_back(std::move(t));
    }
    j = json{{"nx", p.nvars()}, {"terms", std::move(terms)}};
}

inline void from_json(const json &j, XPoly &p) {
    const int nx = j.at("nx").get<int>();
    p = XPoly(nx);
    for (const auto &t : j.at("terms")) {
        const auto x = t.at("x").get<std::vector<int>>();
        XPoly term = XPoly::monomial(nx, x, t.at("coeff").get<QLaurent>());
        if (const int te = t.value("t", 0); te != 0) {
            term = term * XPoly::t_power(nx, te);
        }
        p = p + term;
    }
}

inline void to_json(json &j, const NCPoly &p) {
    json terms = json::array();
    for (const auto &[w, c] : p.terms()) {
        terms.push_back({{"coeff", c}, {"m", w.m}, {"a", w.a}, {"d", w.d}});
    }
    j = json{{"terms", std::move(terms)}};
}

inline void from_json(const json &j, NCPoly &p) {
    p = NCPoly{};
    for (const auto &t : j.at("terms")) {
        NCWord w{t.at("m").get<std::vector<int>>(), t.value("a", 0), t.value("d", 0)};
        if (!std::is_sorted(w.m.begin(), w.m.end())) {
            throw std::invalid_argument("NCPoly JSON word is not in normal order");
        }
        p.add_term(std::move(w), t.at("coeff").get<QLaurent>());
    }
}

inline void to_json(json &j, const UKernel &k) {
    json terms = json::array();
    for (const auto &[e, c] : k.terms()) {
        terms.push_back({{"e", e}, {"coeff", c}});
    }
    j = json{{"arity", k.arity()}, {"terms", std::move(terms)}};
}

inline void from_json(const json &j, UKernel &k) {
    k = UKernel(j.at("arity").get<int>());
    for (const auto &t : j.at("terms")) {
        k.add_term(t.at("e").get<UKernel::Exponents>(), t.at("coeff").get<QLaurent>());
    }
}

inline void to_json(json &j, const ShiftOp &op) {
    json terms = json::array();
    for (const auto &[eps, c] : op.terms()) {
        json den = json::array();
        for (const auto &[f, pw] : c.denominator()) {
            den.push_back({{"i", f.i}, {"j", f.j}, {"pow", pw}, {"shift", f.shift}});
        }
        terms.push_back({{"eps", eps}, {"num", c.numerator()}, {"den", std::move(den)}});
    }
    j = json{{"r", op.rank()}, {"terms", std::move(terms)}};
}

inline void from_json(const json &j, ShiftOp &op) {
    const int r = j.at("r").get<int>();
    op = ShiftOp(r);
    for (const auto &t : j.at("terms")) {
        XRat c(t.at("num").get<XPoly>());
        for (const auto &f : t.value("den", json::array())) {
            c = c * XRat::over_linear(XPoly::one(r + 1), f.at("i").get<int>(), f.at("j").get<int>(),
                                      f.value("shift", 0), f.value("pow", 1));
        }
        op.add_term(t.at("eps").get<ShiftOp::Shift>(), c);
    }
}

inline void to_json(json &j, const SuiteParams &p) {
    j = json::object();
    auto opt = [&](const char *key, const auto &v) {
        if (v) {
            j[key] = *v;
        }
    };
    opt("r", p.r);
    opt("alpha", p.alpha);
    opt("n", p.n);
    opt("p", p.p);
    opt("k", p.k);
    opt("order", p.order);
    opt("samples", p.samples);
    opt("max_length", p.max_length);
    opt("strategies", p.strategies);
    j["seed"] = p.seed;
}

inline void from_json(const json &j, SuiteParams &p) {
    p = SuiteParams{};
    auto opt = [&](const char *key, auto &v) {
        if (j.contains(key)) {
            v = j.at(key).get<typename std::remove_reference_t<decltype(v)>::value_type>();
        }
    };
    opt("r", p.r);
    opt("alpha", p.alpha);
    opt("n", p.n);
    opt("p", p.p);
    opt("k", p.k);
    opt("order", p.order);
    opt("samples", p.samples);
    opt("max_length", p.max_length);
    opt("strategies", p.strategies);
    p.seed = j.value("seed", std::uint64_t{0});
}

inline void to_json(json &j, const Witness &w) {
    if (const auto *p = std::get_if<NCPoly>(&w)) {
        j = json{{"type", "ncpoly"}, {"value", *p}};
    } else if (const auto *op = std::get_if<ShiftOp>(&w)) {
        j = json{{"type", "shiftop"}, {"value", *op}};
    } else {
        j = json{{"type", "message"}, {"value", std::get<std::string>(w)}};
    }
}

inline void from_json(const json &j, Witness &w) {
    const auto type = j.at("type").get<std::string>();
    if (type == "ncpoly") {
        w = j.at("value").get<NCPoly>();
    } else if (type == "shiftop") {
        w = j.at("value").get<ShiftOp>();
    } else if (type == "message") {
        w = j.at("value").get<std::string>();
    } else {
        throw std::invalid_argument("unknown witness type '" + type + "'");
    }
}

inline void to_json(json &j, const CheckFailure &f) {
    j = json{{"id", f.id}, {"instantiation", f.instantiation}, {"witness", f.witness}};
}

inline void from_json(const json &j, CheckFailure &f) {
    f.id = j.at("id").get<std::string>();
    f.instantiation = j.at("instantiation").get<std::string>();
    f.witness = j.at("witness").get<Witness>();
}

inline void to_json(json &j, const CheckReport &r) {
    j = json{{"suite", r.suite},
             {"params", r.params},
             {"checks_run", r.checks_run},
             {"passed", r.passed()},
             {"failures", r.failures},
             {"notes", r.notes}};
}

inline void from_json(const json &j, CheckReport &r) {
    r.suite = j.at("suite").get<std::string>();
    r.params = j.at("params").get<SuiteParams>();
    r.checks_run = j.at("checks_run").get<std::size_t>();
    r.failures = j.at("failures").get<std::vector<CheckFailure>>();
    r.notes = j.value("notes", std::vector<std::string>{});
}

} // namespace qq
