#include "dephaser/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dephaser/dynamics.hpp"
#include "dephaser/errors.hpp"
#include "dephaser/presets.hpp"

namespace dephaser {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError("scenario: " + where + ": " + what);
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::size_t count_at(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        fail(where, "expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

bool is_complex_pair(const json& j) {
    return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number();
}

}  // namespace

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!is_complex_pair(j)) throw ValidationError("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a non-empty array of rows");
    std::vector<std::vector<cplx>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw ValidationError("matrix rows must be arrays");
        std::vector<cplx> r;
        for (const auto& v : row) r.push_back(complex_from_json(v));
        rows.push_back(std::move(r));
    }
    try {
        return ComplexMatrix::from_rows(rows);
    } catch (const DimensionError& e) {
        throw ValidationError(e.what());
    }
}

Scenario parse_scenario(const json& j) {
    if (!j.is_object()) fail("<root>", "expected an object");
    static const std::vector<std::string> known{"n_qubits", "hamiltonian", "channels",
                                                "initial_state", "t_max", "steps", "track"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            fail(key, "unknown field");
        }
    }
    Scenario s;
    if (!j.contains("n_qubits")) fail("n_qubits", "missing");
    s.n_qubits = count_at(j["n_qubits"], "n_qubits");
    register_dim(s.n_qubits);

    try {
        if (j.contains("hamiltonian") && !j["hamiltonian"].is_null()) {
            const json& h = j["hamiltonian"];
            if (h.is_object() && h.contains("energies") && h.size() == 1) {
                std::vector<double> e;
                for (std::size_t k = 0; k < h["energies"].size(); ++k)
                    e.push_back(number_at(h["energies"][k], "hamiltonian.energies"));
                s.hamiltonian = std::move(e);
            } else if (h.is_object() && h.contains("matrix") && h.size() == 1) {
                s.hamiltonian = matrix_from_json(h["matrix"]);
            } else {
                fail("hamiltonian", "expected {\"energies\": [...]} or {\"matrix\": [...]}");
            }
        }
    } catch (const ValidationError& e) {
        if (std::string(e.what()).rfind("scenario:", 0) == 0) throw;
        fail("hamiltonian", e.what());
    } catch (const DimensionError& e) {
        fail("hamiltonian", e.what());
    }

    if (j.contains("channels")) {
        if (!j["channels"].is_array()) fail("channels", "expected an array");
        for (std::size_t m = 0; m < j["channels"].size(); ++m) {
            const std::string where = "channels[" + std::to_string(m) + "]";
            const json& c = j["channels"][m];
            if (!c.is_object() || !c.contains("gamma") || !c.contains("operator")) {
                fail(where, "expected {\"gamma\": ..., \"operator\": ...}");
            }
            ChannelSpec spec;
            if (c["gamma"].is_array()) {
                for (const auto& g : c["gamma"]) spec.gamma.push_back(number_at(g, where + ".gamma"));
            } else {
                spec.gamma.push_back(number_at(c["gamma"], where + ".gamma"));
            }
            if (c["operator"].is_string()) {
                spec.op = c["operator"].get<std::string>();
            } else {
                try {
                    spec.op = matrix_from_json(c["operator"]);
                } catch (const Error& e) {
                    fail(where + ".operator", e.what());
                }
                if (spec.gamma.size() != 1) fail(where + ".gamma", "explicit operator takes one rate");
            }
            s.channels.push_back(std::move(spec));
        }
    }

    if (j.contains("initial_state")) {
        const json& init = j["initial_state"];
        if (init.is_string()) {
            s.initial_state = init.get<std::string>();
        } else if (init.is_array()) {
            std::vector<cplx> amps;
            try {
                for (const auto& a : init) amps.push_back(complex_from_json(a));
            } catch (const Error& e) {
                fail("initial_state", e.what());
            }
            s.initial_state = std::move(amps);
        } else {
            fail("initial_state", "expected a name, bitstring or amplitude list");
        }
    }

    if (j.contains("t_max")) s.t_max = number_at(j["t_max"], "t_max");
    if (!(s.t_max > 0.0) || !std::isfinite(s.t_max)) fail("t_max", "must be positive");
    if (j.contains("steps") && !j["steps"].is_null()) {
        s.steps = count_at(j["steps"], "steps");
        if (*s.steps == 0) fail("steps", "must be >= 1");
    }

    if (j.contains("track")) {
        if (!j["track"].is_array()) fail("track", "expected an array of [bits, bits] pairs");
        for (std::size_t k = 0; k < j["track"].size(); ++k) {
            const std::string where = "track[" + std::to_string(k) + "]";
            const json& p = j["track"][k];
            if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
                fail(where, "expected [bits, bits]");
            }
            try {
                BasisState a = BasisState::parse(p[0].get<std::string>());
                BasisState b = BasisState::parse(p[1].get<std::string>());
                if (a.qubits() != s.n_qubits || b.qubits() != s.n_qubits) {
                    fail(where, "bitstrings must have n_qubits characters");
                }
                s.track.emplace_back(a, b);
            } catch (const ValidationError& e) {
                if (std::string(e.what()).rfind("scenario:", 0) == 0) throw;
                fail(where, e.what());
            }
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario " + path + " is not valid JSON: " + e.what());
    }
    return parse_scenario(j);
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["n_qubits"] = s.n_qubits;
    if (const auto* e = std::get_if<std::vector<double>>(&s.hamiltonian)) {
        j["hamiltonian"] = {{"energies", *e}};
    } else if (const auto* m = std::get_if<ComplexMatrix>(&s.hamiltonian)) {
        j["hamiltonian"] = {{"matrix", matrix_to_json(*m)}};
    }
    json channels = json::array();
    for (const auto& c : s.channels) {
        json entry;
        if (c.gamma.size() == 1) {
            entry["gamma"] = c.gamma.front();
        } else {
            entry["gamma"] = c.gamma;
        }
        if (const auto* name = std::get_if<std::string>(&c.op)) {
            entry["operator"] = *name;
        } else {
            entry["operator"] = matrix_to_json(std::get<ComplexMatrix>(c.op));
        }
        channels.push_back(std::move(entry));
    }
    j["channels"] = std::move(channels);
    if (const auto* name = std::get_if<std::string>(&s.initial_state)) {
        j["initial_state"] = *name;
    } else {
        json amps = json::array();
        for (const cplx& a : std::get<std::vector<cplx>>(s.initial_state))
            amps.push_back(complex_to_json(a));
        j["initial_state"] = std::move(amps);
    }
    j["t_max"] = s.t_max;
    if (s.steps) j["steps"] = *s.steps;
    json track = json::array();
    for (const auto& [a, b] : s.track) track.push_back({a.label(), b.label()});
    j["track"] = std::move(track);
    return j;
}

namespace {

StateVector initial_state(const Scenario& s, const Tolerances& tol) {
    if (const auto* amps = std::get_if<std::vector<cplx>>(&s.initial_state)) {
        try {
            return StateVector(s.n_qubits, *amps, tol);
        } catch (const Error& e) {
            fail("initial_state", e.what());
        }
    }
    const std::string& name = std::get<std::string>(s.initial_state);
    if (name == "ghz") return ghz_state(s.n_qubits);
    const std::pair<const char*, Bell> bells[] = {{"psi_plus", Bell::psi_plus},
                                                  {"psi_minus", Bell::psi_minus},
                                                  {"phi_plus", Bell::phi_plus},
                                                  {"phi_minus", Bell::phi_minus}};
    for (const auto& [label, which] : bells) {
        if (name == label) {
            if (s.n_qubits != 2) fail("initial_state", name + " needs n_qubits = 2");
            return bell_state(which);
        }
    }
    try {
        const BasisState b = BasisState::parse(name);
        if (b.qubits() != s.n_qubits) fail("initial_state", "bitstring length differs from n_qubits");
        return StateVector::basis(b);
    } catch (const ValidationError& e) {
        if (std::string(e.what()).rfind("scenario:", 0) == 0) throw;
        fail("initial_state", "unknown state '" + name + "'");
    }
}

}  // namespace

ResolvedScenario resolve(const Scenario& s, const Tolerances& tol) {
    ResolvedScenario r;
    r.n_qubits = s.n_qubits;
    const std::size_t dim = register_dim(s.n_qubits);

    if (const auto* e = std::get_if<std::vector<double>>(&s.hamiltonian)) {
        if (e->size() != dim) fail("hamiltonian.energies", "needs " + std::to_string(dim) + " entries");
        r.hamiltonian = HamiltonianSpec{*e}.matrix();
    } else if (const auto* m = std::get_if<ComplexMatrix>(&s.hamiltonian)) {
        if (m->dim() != dim) fail("hamiltonian.matrix", "must be " + std::to_string(dim) + "x" + std::to_string(dim));
        if (hermiticity_defect(*m) > tol.atol_herm) fail("hamiltonian.matrix", "must be Hermitian");
        r.hamiltonian = *m;
    } else {
        r.hamiltonian = ComplexMatrix(dim);
    }

    for (std::size_t m = 0; m < s.channels.size(); ++m) {
        const std::string where = "channels[" + std::to_string(m) + "]";
        const auto& c = s.channels[m];
        try {
            if (const auto* name = std::get_if<std::string>(&c.op)) {
                // a single rate applies to every channel of the preset
                std::vector<double> rates = c.gamma;
                if (rates.size() == 1) rates.assign(preset_arity(*name, s.n_qubits), rates.front());
                PresetModel model = build_preset({*name, s.n_qubits, rates, {}});
                for (auto& ch : model.channels) r.channels.push_back(std::move(ch));
            } else {
                const auto& op = std::get<ComplexMatrix>(c.op);
                if (op.dim() != dim) fail(where + ".operator", "must be " + std::to_string(dim) + "x" + std::to_string(dim));
                r.channels.emplace_back(c.gamma.front(), op);
            }
        } catch (const ValidationError& e) {
            if (std::string(e.what()).rfind("scenario:", 0) == 0) throw;
            fail(where, e.what());
        }
    }

    r.rho0 = density_from_pure(initial_state(s, tol));
    for (const auto& [a, b] : s.track) r.track.emplace_back(a.index(), b.index());
    r.t_max = s.t_max;
    r.steps = s.steps ? *s.steps : min_stable_steps(r.hamiltonian, r.channels, s.t_max);
    return r;
}

}  // namespace dephaser
