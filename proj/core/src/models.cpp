// Copyright 2026 The lowtrot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lowtrot/models.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "lowtrot/errors.hpp"

namespace lowtrot::models {
namespace {

using linalg::Complex;

Index dim_for(int n) {
    return Index{1} << n;
}

void require_qubits(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw InvalidInput("model needs 1.." + std::to_string(kMaxQubits) + " qubits, got " + std::to_string(n));
    }
}

std::string two_site_string(int n, int a, int b, char pauli) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(a)] = pauli;
    s[static_cast<std::size_t>(b)] = pauli;
    return s;
}

const ComplexMatrix& heisenberg_bond() {
    static const ComplexMatrix bond = -(pauli_operator("XX") + pauli_operator("YY") + pauli_operator("ZZ"));
    return bond;
}

// Adds coupling * -(XX + YY + ZZ) on (a, b) to term and records the bond.
void add_heisenberg_bond(ComplexMatrix& term, std::vector<Interaction>& interactions, int n, int term_index,
                         int a, int b, double coupling) {
    for (char p : {'X', 'Y', 'Z'}) {
        add_pauli_string(term, Complex(-coupling, 0.0), two_site_string(n, a, b, p));
    }
    interactions.push_back({{a, b}, coupling, term_index, coupling * heisenberg_bond()});
}

int parse_int(std::string_view text, const std::string& id) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw InvalidInput("malformed model id '" + id + "'");
    }
    return value;
}

double parse_double(const std::string& text, const std::string& id) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InvalidInput("malformed model id '" + id + "'");
    }
    if (used != text.size() || !std::isfinite(value)) {
        throw InvalidInput("malformed model id '" + id + "'");
    }
    return value;
}

std::vector<int> parse_bits(std::string_view text, const std::string& id) {
    std::vector<int> bits;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw InvalidInput("parity bits must be 0/1 in '" + id + "'");
        }
        bits.push_back(c - '0');
    }
    return bits;
}

struct ParsedId {
    std::string family;
    int a = 0;
    int b = 0;
    double alpha = 0.0;
    std::vector<int> bits;
};

ParsedId parse_id(const std::string& id) {
    const auto colon = id.find(':');
    if (colon == std::string::npos) {
        throw InvalidInput("unknown model id '" + id + "'");
    }
    ParsedId out;
    out.family = id.substr(0, colon);
    const std::string rest = id.substr(colon + 1);
    if (out.family == "chain") {
        out.a = parse_int(rest, id);
    } else if (out.family == "ladder") {
        if (rest.rfind("2x", 0) != 0) {
            throw InvalidInput("ladder ids must look like ladder:2x<cols>, got '" + id + "'");
        }
        out.a = 2;
        out.b = parse_int(std::string_view(rest).substr(2), id);
    } else if (out.family == "powerlaw") {
        const auto colon2 = rest.find(':');
        const auto x = rest.find('x');
        if (colon2 == std::string::npos || x == std::string::npos || x > colon2 ||
            rest.compare(colon2 + 1, 6, "alpha=") != 0) {
            throw InvalidInput("powerlaw ids must look like powerlaw:<rows>x<cols>:alpha=<a>, got '" + id + "'");
        }
        out.a = parse_int(std::string_view(rest).substr(0, x), id);
        out.b = parse_int(std::string_view(rest).substr(x + 1, colon2 - x - 1), id);
        out.alpha = parse_double(rest.substr(colon2 + 7), id);
    } else if (out.family == "parity") {
        out.bits = parse_bits(rest, id);
    } else {
        throw InvalidInput("unknown model family in '" + id + "'");
    }
    return out;
}

}  // namespace

ComplexMatrix HamiltonianModel::total() const {
    ComplexMatrix h = ComplexMatrix::Zero(dim(), dim());
    for (const auto& t : terms) {
        h += t;
    }
    return h;
}

ComplexMatrix HamiltonianModel::total_raw() const {
    ComplexMatrix h = total();
    h.diagonal().array() += shifts.sum();
    return h;
}

void add_pauli_string(ComplexMatrix& m, Complex coeff, const std::string& paulis) {
    const int n = static_cast<int>(paulis.size());
    if (m.rows() != dim_for(n) || m.cols() != dim_for(n)) {
        throw InvalidInput("add_pauli_string: operator dimension does not match string length");
    }
    std::uint64_t flip = 0;
    std::uint64_t zmask = 0;
    int y_count = 0;
    for (int q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        switch (paulis[static_cast<std::size_t>(q)]) {
            case 'I':
                break;
            case 'X':
                flip |= bit;
                break;
            case 'Y':
                flip |= bit;
                zmask |= bit;
                ++y_count;
                break;
            case 'Z':
                zmask |= bit;
                break;
            default:
                throw InvalidInput("add_pauli_string: unknown Pauli '" +
                                   std::string(1, paulis[static_cast<std::size_t>(q)]) + "'");
        }
    }
    // Y = i X Z, so each Y contributes a factor i on top of the Z sign.
    static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex base = coeff * kIPowers[y_count % 4];
    for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(m.cols()); ++col) {
        const bool odd = (std::popcount(col & zmask) & 1) != 0;
        const auto row = static_cast<Index>(col ^ flip);
        m(row, static_cast<Index>(col)) += odd ? -base : base;
    }
}

ComplexMatrix pauli_operator(const std::string& paulis) {
    ComplexMatrix m = ComplexMatrix::Zero(dim_for(static_cast<int>(paulis.size())),
                                          dim_for(static_cast<int>(paulis.size())));
    add_pauli_string(m, Complex(1.0, 0.0), paulis);
    return m;
}

ComplexMatrix tensor_power(const ComplexMatrix& u, int n) {
    if (n < 1) {
        throw InvalidInput("tensor_power: n must be positive");
    }
    ComplexMatrix out = u;
    for (int i = 1; i < n; ++i) {
        out = linalg::kron(out, u);
    }
    return out;
}

HamiltonianModel make_model(std::string id, int n, std::vector<ComplexMatrix> raw_terms,
                            std::vector<Interaction> interactions) {
    require_qubits(n);
    if (raw_terms.empty()) {
        throw InvalidInput("model '" + id + "' has no terms");
    }
    HamiltonianModel model;
    model.id = std::move(id);
    model.n = n;
    model.shifts.resize(static_cast<Index>(raw_terms.size()));
    model.term_norms.resize(static_cast<Index>(raw_terms.size()));
    for (std::size_t l = 0; l < raw_terms.size(); ++l) {
        auto& term = raw_terms[l];
        if (term.rows() != dim_for(n) || term.cols() != dim_for(n)) {
            throw InvalidInput("model '" + model.id + "': term " + std::to_string(l + 1) +
                               " has the wrong dimension");
        }
        const RealVector spectrum = linalg::eigvalsh(term);
        const double ground = spectrum(0);
        term.diagonal().array() -= ground;
        model.shifts(static_cast<Index>(l)) = ground;
        model.term_norms(static_cast<Index>(l)) = spectrum(spectrum.size() - 1) - ground;
    }
    model.terms = std::move(raw_terms);
    model.interactions = std::move(interactions);
    return model;
}

HamiltonianModel select_terms(const HamiltonianModel& model, const std::vector<int>& indices) {
    if (indices.empty()) {
        throw InvalidInput("select_terms: empty selection");
    }
    HamiltonianModel out;
    out.n = model.n;
    out.id = model.id + "[";
    out.shifts.resize(static_cast<Index>(indices.size()));
    out.term_norms.resize(static_cast<Index>(indices.size()));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int l = indices[i];
        if (l < 0 || l >= model.num_terms()) {
            throw InvalidInput("select_terms: term index out of range");
        }
        out.terms.push_back(model.terms[static_cast<std::size_t>(l)]);
        out.shifts(static_cast<Index>(i)) = model.shifts(l);
        out.term_norms(static_cast<Index>(i)) = model.term_norms(l);
        out.id += (i ? "," : "") + std::to_string(l + 1);
        for (const auto& inter : model.interactions) {
            if (inter.term == l) {
                auto copy = inter;
                copy.term = static_cast<int>(i);
                out.interactions.push_back(std::move(copy));
            }
        }
    }
    out.id += "]";
    return out;
}

HamiltonianModel heisenberg_chain(int n) {
    if (n < 2 || n > 8) {
        throw InvalidInput("chain length must be in 2..8, got " + std::to_string(n));
    }
    std::vector<ComplexMatrix> terms;
    std::vector<Interaction> interactions;
    int l = 0;
    for (char p : {'X', 'Y', 'Z'}) {
        ComplexMatrix term = ComplexMatrix::Zero(dim_for(n), dim_for(n));
        const std::string local = std::string(2, p);
        for (int i = 0; i + 1 < n; ++i) {
            add_pauli_string(term, Complex(-1.0, 0.0), two_site_string(n, i, i + 1, p));
            interactions.push_back({{i, i + 1}, 1.0, l, -pauli_operator(local)});
        }
        terms.push_back(std::move(term));
        ++l;
    }
    return make_model("chain:" + std::to_string(n), n, std::move(terms), std::move(interactions));
}

HamiltonianModel heisenberg_ladder(int cols) {
    if (cols < 2 || cols > 6) {
        throw InvalidInput("ladder columns must be in 2..6, got " + std::to_string(cols));
    }
    const int n = 2 * cols;
    auto site = [cols](int row, int col) { return row * cols + col; };
    std::vector<ComplexMatrix> terms(3, ComplexMatrix::Zero(dim_for(n), dim_for(n)));
    std::vector<Interaction> interactions;
    for (int row = 0; row < 2; ++row) {
        for (int col = 0; col + 1 < cols; ++col) {
            const int l = col % 2;
            add_heisenberg_bond(terms[static_cast<std::size_t>(l)], interactions, n, l, site(row, col),
                                site(row, col + 1), 1.0);
        }
    }
    for (int col = 0; col < cols; ++col) {
        add_heisenberg_bond(terms[2], interactions, n, 2, site(0, col), site(1, col), 1.0);
    }
    return make_model("ladder:2x" + std::to_string(cols), n, std::move(terms), std::move(interactions));
}

HamiltonianModel power_law_lattice(int rows, int cols, double alpha) {
    if (rows < 2 || cols < 2) {
        throw InvalidInput("power-law lattice needs at least 2 rows and 2 columns");
    }
    if (rows * cols > kMaxQubits) {
        throw InvalidInput("power-law lattice " + std::to_string(rows) + "x" + std::to_string(cols) +
                           " exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw InvalidInput("power-law exponent alpha must be finite and >= 0");
    }
    const int n = rows * cols;
    std::vector<ComplexMatrix> terms(3, ComplexMatrix::Zero(dim_for(n), dim_for(n)));
    std::vector<Interaction> interactions;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int ri = i / cols, ci = i % cols, rj = j / cols, cj = j % cols;
            const double dist = std::hypot(static_cast<double>(ri - rj), static_cast<double>(ci - cj));
            const double coupling = std::pow(dist, -alpha);
            const int l = ri == rj ? 0 : (ci == cj ? 1 : 2);
            add_heisenberg_bond(terms[static_cast<std::size_t>(l)], interactions, n, l, i, j, coupling);
        }
    }
    std::ostringstream id;
    id << "powerlaw:" << rows << "x" << cols << ":alpha=" << alpha;
    return make_model(id.str(), n, std::move(terms), std::move(interactions));
}

Index parity_index(int D, int track, int position) {
    return static_cast<Index>(track) * (D + 1) + position;
}

ParityInstance parity_hamiltonian(const std::vector<int>& bits) {
    const int D = static_cast<int>(bits.size());
    if (D < 1 || D > 10) {
        throw InvalidInput("parity path length must be in 1..10, got " + std::to_string(D));
    }
    ParityInstance inst;
    inst.D = D;
    inst.bits = bits;
    inst.dim = 2 * (D + 1);
    inst.H = ComplexMatrix::Zero(inst.dim, inst.dim);
    int parity = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw InvalidInput("parity bits must be 0 or 1");
        }
        parity ^= b;
    }
    inst.parity = parity;
    for (int j = 0; j < D; ++j) {
        const double w = 0.5 * std::sqrt(static_cast<double>((D - j) * (j + 1)));
        for (int track = 0; track < 2; ++track) {
            const int next_track = track ^ bits[static_cast<std::size_t>(j)];
            const Index a = parity_index(D, track, j);
            const Index b = parity_index(D, next_track, j + 1);
            inst.H(a, b) = w;
            inst.H(b, a) = w;
        }
    }
    inst.H.diagonal().array() += 0.5 * D;
    inst.start_index = parity_index(D, 0, 0);
    inst.target_index = parity_index(D, parity, D);
    inst.wrong_target_index = parity_index(D, parity ^ 1, D);
    return inst;
}

HamiltonianModel parity_model(const std::vector<int>& bits) {
    ParityInstance inst = parity_hamiltonian(bits);
    HamiltonianModel model;
    model.id = "parity:";
    for (int b : bits) {
        model.id += static_cast<char>('0' + b);
    }
    // Not a qubit system; n records the path length.
    model.n = inst.D;
    const RealVector spectrum = linalg::eigvalsh(inst.H);
    model.shifts = RealVector::Zero(1);
    model.term_norms = RealVector::Constant(1, spectrum(spectrum.size() - 1));
    model.terms.push_back(std::move(inst.H));
    return model;
}

LocalityMeta model_meta(const HamiltonianModel& model) {
    LocalityMeta meta;
    meta.lambda_H = model.term_norms.sum();
    meta.lambda_h = model.term_norms.maxCoeff();
    const int L = model.num_terms();
    if (model.interactions.empty()) {
        meta.k = model.n;
        meta.M = 1;
        meta.d = L;
        meta.J = meta.lambda_h;
        meta.g = meta.lambda_H;
        return meta;
    }
    struct Bond {
        ComplexMatrix op;
        double coupling = 0.0;
        std::set<int> terms;
    };
    std::map<std::vector<int>, Bond> bonds;
    std::vector<std::set<int>> terms_on_site(static_cast<std::size_t>(model.n));
    for (const auto& inter : model.interactions) {
        std::vector<int> key = inter.sites;
        std::sort(key.begin(), key.end());
        meta.k = std::max(meta.k, static_cast<int>(key.size()));
        auto [it, inserted] = bonds.try_emplace(key);
        Bond& bond = it->second;
        if (inserted) {
            bond.op = inter.local;
        } else {
            bond.op += inter.local;
        }
        bond.coupling = std::max(bond.coupling, std::abs(inter.coupling));
        bond.terms.insert(inter.term);
        for (int s : key) {
            terms_on_site[static_cast<std::size_t>(s)].insert(inter.term);
        }
    }
    std::vector<int> bonds_per_term(static_cast<std::size_t>(L), 0);
    std::vector<double> coupling_on_site(static_cast<std::size_t>(model.n), 0.0);
    for (const auto& [sites, bond] : bonds) {
        meta.J = std::max(meta.J, linalg::spectral_norm(bond.op));
        for (int l : bond.terms) {
            ++bonds_per_term[static_cast<std::size_t>(l)];
        }
        for (int s : sites) {
            coupling_on_site[static_cast<std::size_t>(s)] += bond.coupling;
        }
    }
    meta.M = *std::max_element(bonds_per_term.begin(), bonds_per_term.end());
    meta.g = *std::max_element(coupling_on_site.begin(), coupling_on_site.end());
    for (const auto& set : terms_on_site) {
        meta.d = std::max(meta.d, static_cast<int>(set.size()));
    }
    return meta;
}

HamiltonianModel build_model(const std::string& id) {
    const ParsedId parsed = parse_id(id);
    if (parsed.family == "chain") {
        return heisenberg_chain(parsed.a);
    }
    if (parsed.family == "ladder") {
        return heisenberg_ladder(parsed.b);
    }
    if (parsed.family == "powerlaw") {
        return power_law_lattice(parsed.a, parsed.b, parsed.alpha);
    }
    return parity_model(parsed.bits);
}

int qubits_for_id(const std::string& id) {
    const ParsedId parsed = parse_id(id);
    if (parsed.family == "chain") {
        return parsed.a;
    }
    if (parsed.family == "ladder") {
        return 2 * parsed.b;
    }
    if (parsed.family == "powerlaw") {
        return parsed.a * parsed.b;
    }
    return 0;
}

Index dimension_for_id(const std::string& id) {
    const ParsedId parsed = parse_id(id);
    if (parsed.family == "parity") {
        return 2 * (static_cast<Index>(parsed.bits.size()) + 1);
    }
    const int n = qubits_for_id(id);
    // Clamp before shifting; oversize ids are rejected by callers.
    return n > 30 ? Index{1} << 30 : Index{1} << n;
}

}  // namespace lowtrot::models
