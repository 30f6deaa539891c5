// Copyright 2026 The lgtsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cstdio>
#include <sstream>
#include <string>

#include "lgtsim/error.hpp"
#include "lgtsim/gateset.hpp"

namespace lgtsim {

namespace {

std::string fmt_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    return out;
}

} // namespace

std::string to_text(const Circuit &circuit, const ParamVector &params) {
    const Circuit bound = circuit.n_params() > 0 ? circuit.bind(params) : circuit;
    std::ostringstream out;
    out << "# n_qubits " << bound.n_qubits() << "\n";
    for (const Gate &g : bound.gates()) {
        if (g.kind == GateKind::Unitary)
            throw ValidationError("to_text: opaque unitary gates cannot be serialized");
        out << kind_name(g.kind) << ' ';
        for (std::size_t i = 0; i < g.targets.size(); ++i)
            out << (i ? "," : "") << g.targets[i];
        if (!g.params.empty()) {
            out << ' ';
            for (std::size_t i = 0; i < g.params.size(); ++i)
                out << (i ? "," : "") << fmt_angle(g.params[i]);
        }
        out << "\n";
    }
    return out.str();
}

Circuit from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int declared = -1;
    int max_q = -1;
    std::vector<Gate> gates;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            std::istringstream c(line.substr(hash + 1));
            std::string key;
            int n = 0;
            if (c >> key >> n && key == "n_qubits")
                declared = n;
            line = line.substr(0, hash);
        }
        std::istringstream ls(line);
        std::string kind, qs, as, extra;
        if (!(ls >> kind))
            continue;
        const auto k = kind_from_name(kind);
        if (!k || *k == GateKind::Unitary)
            throw ValidationError("line " + std::to_string(lineno) + ": unknown gate kind '" +
                                  kind + "'");
        if (!(ls >> qs))
            throw ValidationError("line " + std::to_string(lineno) + ": missing targets");
        ls >> as;
        if (ls >> extra)
            throw ValidationError("line " + std::to_string(lineno) + ": trailing tokens");
        std::vector<int> targets;
        std::vector<double> params;
        try {
            for (const auto &t : split(qs, ','))
                targets.push_back(std::stoi(t));
            if (!as.empty())
                for (const auto &a : split(as, ','))
                    params.push_back(std::stod(a));
        } catch (const std::exception &) {
            throw ValidationError("line " + std::to_string(lineno) + ": malformed number");
        }
        if (static_cast<int>(params.size()) != param_arity(*k))
            throw ValidationError("line " + std::to_string(lineno) + ": wrong angle count");
        for (int q : targets)
            max_q = std::max(max_q, q);
        gates.push_back(Gate::make(*k, std::move(targets), std::move(params)));
    }
    const int n = declared > 0 ? declared : max_q + 1;
    if (n < 1)
        throw ValidationError("from_text: cannot infer qubit count");
    Circuit c(n);
    for (Gate &g : gates)
        c.add(std::move(g));
    return c;
}

} // namespace lgtsim
