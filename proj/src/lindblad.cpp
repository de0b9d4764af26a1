// Copyright 2026 The cerfold Authors
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

#include "cerfold/lindblad.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cerfold/errors.hpp"

namespace cerfold {

using cd = std::complex<double>;

namespace {

std::string describe_term(const PauliString& p) { return p.str(); }

constexpr std::array<cd, 4> kIPowers{cd{1, 0}, cd{0, 1}, cd{-1, 0}, cd{0, -1}};

cd ipow(int k) { return kIPowers[static_cast<std::size_t>(((k % 4) + 4) % 4)]; }

}  // namespace

std::uint32_t LindbladJump::support_mask() const {
  std::uint32_t m = 0;
  for (const auto& t : terms) m |= t.pauli.support_mask();
  return m;
}

cd LindbladJump::coefficient(const PauliString& p) const {
  for (const auto& t : terms) {
    if (t.pauli == p) return t.coefficient;
  }
  return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// ConnectivityGraph

ConnectivityGraph::ConnectivityGraph(int num_qubits, std::vector<std::pair<int, int>> edges)
    : n_(num_qubits), neighbours_(static_cast<std::size_t>(std::max(num_qubits, 0)), 0u) {
  if (num_qubits < 0 || num_qubits > PauliString::kMaxQubits) {
    throw ConfigError("graph: qubit count must be in [0, " +
                      std::to_string(PauliString::kMaxQubits) + "]");
  }
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) {
      throw ConfigError("graph: edge (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") references a qubit outside [0, " + std::to_string(n_) + ")");
    }
    if (a == b) throw ConfigError("graph: self-loop on qubit " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (std::find(edges_.begin(), edges_.end(), std::pair{a, b}) != edges_.end()) continue;
    edges_.emplace_back(a, b);
    neighbours_[static_cast<std::size_t>(a)] |= 1u << b;
    neighbours_[static_cast<std::size_t>(b)] |= 1u << a;
  }
}

ConnectivityGraph ConnectivityGraph::line(int num_qubits) {
  std::vector<std::pair<int, int>> e;
  for (int q = 0; q + 1 < num_qubits; ++q) e.emplace_back(q, q + 1);
  return {num_qubits, std::move(e)};
}

ConnectivityGraph ConnectivityGraph::complete(int num_qubits) {
  std::vector<std::pair<int, int>> e;
  for (int a = 0; a < num_qubits; ++a) {
    for (int b = a + 1; b < num_qubits; ++b) e.emplace_back(a, b);
  }
  return {num_qubits, std::move(e)};
}

bool ConnectivityGraph::is_connected(std::uint32_t vertices) const {
  if (vertices == 0) return true;
  std::uint32_t seen = vertices & (~vertices + 1u);  // lowest vertex
  std::uint32_t frontier = seen;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) {
      next |= neighbours_[static_cast<std::size_t>(std::countr_zero(f))];
    }
    next &= vertices & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == vertices;
}

int ConnectivityGraph::area_of_effect(std::uint32_t support) const {
  if (support == 0) return 0;
  if (is_connected(support)) return std::popcount(support);
  const std::uint32_t all = n_ == 32 ? ~0u : ((1u << n_) - 1u);
  const std::uint32_t free = all & ~support;
  int best = -1;
  // Enumerate subsets of the complement.
  std::uint32_t extra = 0;
  while (true) {
    const std::uint32_t w = support | extra;
    const int size = std::popcount(w);
    if ((best < 0 || size < best) && is_connected(w)) best = size;
    if (extra == free) break;
    extra = (extra - free) & free;
  }
  return best;
}

// ---------------------------------------------------------------------------
// NoiseModel

NoiseModel::NoiseModel(ConnectivityGraph graph, std::vector<HamiltonianTerm> hamiltonian,
                       std::vector<LindbladJump> jumps, int locality_k)
    : graph_(std::move(graph)), locality_k_(locality_k) {
  if (locality_k < 1) throw ConfigError("noise model: locality_k must be >= 1");
  const int n = graph_.num_qubits();

  auto check_locality = [&](std::uint32_t support, const std::string& what) {
    const int aoe = graph_.area_of_effect(support);
    if (aoe < 0) {
      throw ConfigError("noise model: " + what + " acts on a graph-disconnected support");
    }
    if (aoe > locality_k_) {
      throw ConfigError("noise model: " + what + " has area of effect " + std::to_string(aoe) +
                        " > locality_k = " + std::to_string(locality_k_));
    }
  };

  std::map<PauliString, double> merged_h;
  for (const auto& t : hamiltonian) {
    if (t.pauli.num_qubits() != n) {
      throw ConfigError("noise model: Hamiltonian term " + t.pauli.str() + " has " +
                        std::to_string(t.pauli.num_qubits()) + " qubits, model has " +
                        std::to_string(n));
    }
    if (t.pauli.is_identity()) {
      throw ConfigError("noise model: identity Hamiltonian term is not allowed");
    }
    if (!std::isfinite(t.coefficient)) throw ConfigError("noise model: non-finite h coefficient");
    merged_h[t.pauli] += t.coefficient;
  }
  for (const auto& [p, h] : merged_h) {
    check_locality(p.support_mask(), "Hamiltonian term " + describe_term(p));
    hamiltonian_.push_back({p, h});
  }

  for (const auto& j : jumps) {
    std::map<PauliString, cd> merged;
    for (const auto& t : j.terms) {
      if (t.pauli.num_qubits() != n) {
        throw ConfigError("noise model: jump " + std::to_string(j.label) + " term " +
                          t.pauli.str() + " has the wrong qubit count");
      }
      if (t.pauli.is_identity()) {
        throw ConfigError("noise model: jump " + std::to_string(j.label) +
                          " has an identity term (jumps must be traceless)");
      }
      if (!std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag())) {
        throw ConfigError("noise model: non-finite jump coefficient");
      }
      merged[t.pauli] += t.coefficient;
    }
    LindbladJump out{j.label, {}};
    for (const auto& [p, c] : merged) out.terms.push_back({p, c});
    if (out.terms.empty()) continue;
    check_locality(out.support_mask(), "jump " + std::to_string(j.label));
    jumps_.push_back(std::move(out));
  }
}

NoiseModel NoiseModel::empty(int num_qubits) {
  return NoiseModel(ConnectivityGraph::line(num_qubits), {}, {}, 1);
}

double NoiseModel::hamiltonian_coefficient(const PauliString& p) const {
  for (const auto& t : hamiltonian_) {
    if (t.pauli == p) return t.coefficient;
  }
  return 0.0;
}

std::uint32_t NoiseModel::support_mask() const {
  std::uint32_t m = 0;
  for (const auto& t : hamiltonian_) m |= t.pauli.support_mask();
  for (const auto& j : jumps_) m |= j.support_mask();
  return m;
}

std::vector<LindbladJump> relaxation_jumps(int num_qubits, int qubit, double t1, double t2,
                                           double cycle_time, int first_label) {
  if (!(t1 > 0.0) || !(t2 > 0.0) || !(cycle_time > 0.0)) {
    throw ConfigError("t1t2: T1, T2 and cycle_time must be positive");
  }
  if (t2 > 2.0 * t1 * (1.0 + 1e-12)) {
    throw ConfigError("t1t2: T2 must not exceed 2 T1 on qubit " + std::to_string(qubit));
  }
  std::vector<LindbladJump> out;
  const double gamma1 = cycle_time / t1;
  const double amp = std::sqrt(gamma1) / 2.0;
  out.push_back({first_label,
                 {{PauliString::single(num_qubits, qubit, 'X'), cd{amp, 0.0}},
                  {PauliString::single(num_qubits, qubit, 'Y'), cd{0.0, amp}}}});
  const double gamma_phi = std::max(0.0, cycle_time * (1.0 / t2 - 0.5 / t1));
  if (gamma_phi > 0.0) {
    out.push_back({first_label + 1,
                   {{PauliString::single(num_qubits, qubit, 'Z'),
                     cd{std::sqrt(gamma_phi / 2.0), 0.0}}}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Localization helpers

PauliString localize(const PauliString& global, std::span<const int> support) {
  std::uint32_t x = 0, z = 0, covered = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const int q = support[i];
    if (q < 0 || q >= global.num_qubits()) {
      throw std::invalid_argument("support qubit " + std::to_string(q) + " out of range");
    }
    covered |= 1u << q;
    if ((global.x_mask() >> q) & 1u) x |= 1u << i;
    if ((global.z_mask() >> q) & 1u) z |= 1u << i;
  }
  if (global.support_mask() & ~covered) {
    throw std::invalid_argument("Pauli " + global.str() + " acts outside the given support");
  }
  return PauliString(static_cast<int>(support.size()), x, z);
}

PauliString globalize(const PauliString& local, std::span<const int> support, int num_qubits) {
  if (static_cast<std::size_t>(local.num_qubits()) != support.size()) {
    throw std::invalid_argument("globalize: Pauli size does not match the support");
  }
  std::uint32_t x = 0, z = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const int q = support[i];
    if (q < 0 || q >= num_qubits) throw std::invalid_argument("globalize: qubit out of range");
    if ((local.x_mask() >> i) & 1u) x |= 1u << q;
    if ((local.z_mask() >> i) & 1u) z |= 1u << q;
  }
  return PauliString(num_qubits, x, z);
}

// ---------------------------------------------------------------------------
// Generator

namespace {

struct LocalTerm {
  std::uint32_t x;
  std::uint32_t z;
  cd c;
};

std::size_t local_index(std::uint32_t x, std::uint32_t z, int w) {
  std::size_t idx = 0;
  for (int q = 0; q < w; ++q) {
    const bool xb = (x >> q) & 1u;
    const bool zb = (z >> q) & 1u;
    idx = (idx << 2) | static_cast<std::size_t>(xb ? (zb ? 2 : 1) : (zb ? 3 : 0));
  }
  return idx;
}

void check_support(std::span<const int> support, int n) {
  if (static_cast<int>(support.size()) > kMaxSuperoperatorQubits) {
    throw std::invalid_argument("support of " + std::to_string(support.size()) +
                                " qubits exceeds the superoperator size limit of " +
                                std::to_string(kMaxSuperoperatorQubits));
  }
  std::uint32_t seen = 0;
  for (int q : support) {
    if (q < 0 || q >= n) {
      throw std::invalid_argument("support qubit " + std::to_string(q) + " out of range");
    }
    if (seen & (1u << q)) throw std::invalid_argument("support lists a qubit twice");
    seen |= 1u << q;
  }
}

}  // namespace

Superoperator build_generator(const NoiseModel& model, std::span<const int> support) {
  const int n = model.num_qubits();
  check_support(support, n);
  const int w = static_cast<int>(support.size());
  std::uint32_t covered = 0;
  for (int q : support) covered |= 1u << q;
  if (model.support_mask() & ~covered) {
    throw std::invalid_argument(
        "build_generator: support does not cover every model term (restrict the model first)");
  }

  std::vector<LocalTerm> ham;
  for (const auto& t : model.hamiltonian()) {
    const auto p = localize(t.pauli, support);
    ham.push_back({p.x_mask(), p.z_mask(), cd{t.coefficient, 0.0}});
  }
  std::vector<std::vector<LocalTerm>> jumps;
  for (const auto& j : model.jumps()) {
    auto& out = jumps.emplace_back();
    for (const auto& t : j.terms) {
      const auto p = localize(t.pauli, support);
      out.push_back({p.x_mask(), p.z_mask(), t.coefficient});
    }
  }

  const auto dim = static_cast<Eigen::Index>(pauli_count(w));
  Superoperator gen{{support.begin(), support.end()},
                    Eigen::MatrixXd::Zero(dim, dim),
                    SuperoperatorKind::kGenerator};
  std::vector<cd> column(static_cast<std::size_t>(dim));
  double max_imag = 0.0;

  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto p = PauliString::from_index(w, static_cast<std::size_t>(col));
    const std::uint32_t px = p.x_mask(), pz = p.z_mask();
    std::fill(column.begin(), column.end(), cd{0.0, 0.0});

    // -i [h A, P] = -2 h i^{g+1} R for anticommuting A, P with A P = i^g R.
    for (const auto& a : ham) {
      if (commutation_sign(a.x, a.z, px, pz) > 0) continue;
      const int g = product_phase(a.x, a.z, px, pz);
      column[local_index(a.x ^ px, a.z ^ pz, w)] += -2.0 * a.c * ipow(g + 1);
    }

    // sum_{S,S'} l_S conj(l_S') (S P S' - 1/2 S' S P - 1/2 P S' S)
    for (const auto& terms : jumps) {
      for (const auto& s : terms) {
        for (const auto& sp : terms) {
          const cd c = s.c * std::conj(sp.c);
          // S P S'
          const int g1 = product_phase(s.x, s.z, px, pz);
          const std::uint32_t r1x = s.x ^ px, r1z = s.z ^ pz;
          const int g2 = product_phase(r1x, r1z, sp.x, sp.z);
          column[local_index(r1x ^ sp.x, r1z ^ sp.z, w)] += c * ipow(g1 + g2);
          // S' S
          const int g3 = product_phase(sp.x, sp.z, s.x, s.z);
          const std::uint32_t tx = sp.x ^ s.x, tz = sp.z ^ s.z;
          const std::size_t r = local_index(tx ^ px, tz ^ pz, w);
          column[r] += -0.5 * c * ipow(g3 + product_phase(tx, tz, px, pz));
          column[r] += -0.5 * c * ipow(g3 + product_phase(px, pz, tx, tz));
        }
      }
    }

    for (Eigen::Index row = 0; row < dim; ++row) {
      const cd v = column[static_cast<std::size_t>(row)];
      gen.matrix(row, col) = v.real();
      max_imag = std::max(max_imag, std::abs(v.imag()));
    }
  }
  if (max_imag > 1e-9 * (1.0 + gen.matrix.cwiseAbs().maxCoeff())) {
    throw NumericalIntegrityError("build_generator: generator has imaginary Pauli-basis entries");
  }
  return gen;
}

Superoperator build_generator(const NoiseModel& model) {
  std::vector<int> support(static_cast<std::size_t>(model.num_qubits()));
  for (int q = 0; q < model.num_qubits(); ++q) support[static_cast<std::size_t>(q)] = q;
  return build_generator(model, support);
}

namespace {

// Coefficient of the operator i^phase R inside L_j, using the convention
// l_{j,B} = tr(B L_j) / 2^n.
cd jump_coefficient_of(const LindbladJump& jump, const SignedPauli& b) {
  return b.phase_value() * jump.coefficient(b.pauli);
}

}  // namespace

double transition_amplitude(const NoiseModel& model, const PauliString& p, const PauliString& q) {
  const int n = model.num_qubits();
  if (p.num_qubits() != n || q.num_qubits() != n) {
    throw std::invalid_argument("transition_amplitude: Pauli size does not match the model");
  }
  const int chi_pq = commutes(p, q);

  if (p == q) {
    // Case 1: -2 sum_{S anticommuting with P} sum_j |l_{j,S}|^2
    double acc = 0.0;
    for (const auto& j : model.jumps()) {
      for (const auto& s : j.terms) {
        if (anticommute(p, s.pauli)) acc += std::norm(s.coefficient);
      }
    }
    return -2.0 * acc;
  }

  const SignedPauli pq = multiply(p, q);
  double dissipative = 0.0;
  for (const auto& j : model.jumps()) {
    for (const auto& s : j.terms) {
      const SignedPauli pqs = multiply(pq, SignedPauli{s.pauli, 0});
      const double re = std::real(s.coefficient * std::conj(jump_coefficient_of(j, pqs)));
      if (re == 0.0) continue;
      if (chi_pq > 0) {
        // Case 2: only S anticommuting with Q contribute, with weight -2.
        if (anticommute(q, s.pauli)) dissipative += -2.0 * re;
      } else {
        // Case 3: weight chi_{Q,S}.
        dissipative += re * commutes(q, s.pauli);
      }
    }
  }
  if (chi_pq > 0) return dissipative;

  // h_{PQ} = tr((PQ)^dagger H) / 2^n for PQ = i^k R.
  const cd h_pq = std::conj(pq.phase_value()) * model.hamiltonian_coefficient(pq.pauli);
  return 2.0 * std::real(cd{0.0, 1.0} * h_pq) + dissipative;
}

NoiseModel restrict(const NoiseModel& model, std::span<const int> support) {
  std::uint32_t keep = 0;
  for (int q : support) {
    if (q >= 0 && q < model.num_qubits()) keep |= 1u << q;
  }
  NoiseModel out;
  out.graph_ = model.graph_;
  out.locality_k_ = model.locality_k_;
  out.dropped_ = model.dropped_;
  for (const auto& t : model.hamiltonian_) {
    if (t.pauli.support_mask() & ~keep) {
      out.dropped_.push_back("h[" + t.pauli.str() + "]");
    } else {
      out.hamiltonian_.push_back(t);
    }
  }
  for (const auto& j : model.jumps_) {
    LindbladJump kept{j.label, {}};
    for (const auto& t : j.terms) {
      if (t.pauli.support_mask() & ~keep) {
        out.dropped_.push_back("l[" + std::to_string(j.label) + "," + t.pauli.str() + "]");
      } else {
        kept.terms.push_back(t);
      }
    }
    if (!kept.terms.empty()) out.jumps_.push_back(std::move(kept));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError("noise model: missing key '" + path + key + "'");
  }
  return obj.at(key);
}

template <typename T>
T get_as(const json& value, const std::string& path) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("noise model: key '" + path + "' has the wrong type (" + e.what() + ")");
  }
}

PauliString parse_term_pauli(const json& value, int n, const std::string& path) {
  const auto text = get_as<std::string>(value, path);
  PauliString p;
  try {
    p = PauliString::parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("noise model: key '" + path + "': " + e.what());
  }
  if (p.num_qubits() != n) {
    throw ConfigError("noise model: key '" + path + "' = \"" + text + "\" must have " +
                      std::to_string(n) + " characters");
  }
  return p;
}

}  // namespace

NoiseModel parse_noise_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("noise model: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("noise model: top level must be an object");
  const int n = get_as<int>(require(doc, "n", ""), "n");

  std::vector<std::pair<int, int>> edges;
  if (doc.contains("edges")) {
    const auto& e = doc.at("edges");
    if (!e.is_array()) throw ConfigError("noise model: key 'edges' must be an array");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string path = "edges[" + std::to_string(i) + "]";
      const auto pair = get_as<std::vector<int>>(e[i], path);
      if (pair.size() != 2) throw ConfigError("noise model: key '" + path + "' must be [a, b]");
      edges.emplace_back(pair[0], pair[1]);
    }
  }
  const int k = doc.contains("locality_k") ? get_as<int>(doc.at("locality_k"), "locality_k") : 2;

  std::vector<HamiltonianTerm> ham;
  if (doc.contains("hamiltonian")) {
    const auto& h = doc.at("hamiltonian");
    if (!h.is_array()) throw ConfigError("noise model: key 'hamiltonian' must be an array");
    for (std::size_t i = 0; i < h.size(); ++i) {
      const std::string path = "hamiltonian[" + std::to_string(i) + "].";
      ham.push_back({parse_term_pauli(require(h[i], "pauli", path), n, path + "pauli"),
                     get_as<double>(require(h[i], "h", path), path + "h")});
    }
  }

  std::vector<LindbladJump> jumps;
  int next_label = 0;
  if (doc.contains("jumps")) {
    const auto& js = doc.at("jumps");
    if (!js.is_array()) throw ConfigError("noise model: key 'jumps' must be an array");
    for (std::size_t i = 0; i < js.size(); ++i) {
      const std::string path = "jumps[" + std::to_string(i) + "].";
      LindbladJump jump;
      jump.label = js[i].contains("label") ? get_as<int>(js[i].at("label"), path + "label")
                                           : static_cast<int>(i);
      next_label = std::max(next_label, jump.label + 1);
      const auto& terms = require(js[i], "terms", path);
      if (!terms.is_array()) throw ConfigError("noise model: key '" + path + "terms' must be an array");
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string tp = path + "terms[" + std::to_string(t) + "].";
        const double re = terms[t].contains("re") ? get_as<double>(terms[t].at("re"), tp + "re") : 0.0;
        const double im = terms[t].contains("im") ? get_as<double>(terms[t].at("im"), tp + "im") : 0.0;
        jump.terms.push_back({parse_term_pauli(require(terms[t], "pauli", tp), n, tp + "pauli"),
                              cd{re, im}});
      }
      jumps.push_back(std::move(jump));
    }
  }

  if (doc.contains("t1t2")) {
    const auto& tt = doc.at("t1t2");
    if (!tt.is_array()) throw ConfigError("noise model: key 't1t2' must be an array");
    for (std::size_t i = 0; i < tt.size(); ++i) {
      if (tt[i].is_null()) continue;
      const std::string path = "t1t2[" + std::to_string(i) + "].";
      const int qubit = tt[i].contains("qubit") ? get_as<int>(tt[i].at("qubit"), path + "qubit")
                                                : static_cast<int>(i);
      if (qubit < 0 || qubit >= n) {
        throw ConfigError("noise model: key '" + path + "qubit' out of range");
      }
      auto relax = relaxation_jumps(n, qubit, get_as<double>(require(tt[i], "t1", path), path + "t1"),
                                    get_as<double>(require(tt[i], "t2", path), path + "t2"),
                                    get_as<double>(require(tt[i], "cycle_time", path), path + "cycle_time"),
                                    next_label);
      for (auto& j : relax) {
        next_label = std::max(next_label, j.label + 1);
        jumps.push_back(std::move(j));
      }
    }
  }

  return NoiseModel(ConnectivityGraph(n, std::move(edges)), std::move(ham), std::move(jumps), k);
}

NoiseModel load_noise_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open noise model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_noise_model(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string noise_model_to_json(const NoiseModel& model) {
  json doc;
  doc["n"] = model.num_qubits();
  doc["edges"] = json::array();
  for (auto [a, b] : model.graph().edges()) doc["edges"].push_back({a, b});
  doc["locality_k"] = model.locality_k();
  doc["hamiltonian"] = json::array();
  for (const auto& t : model.hamiltonian()) {
    doc["hamiltonian"].push_back({{"pauli", t.pauli.str()}, {"h", t.coefficient}});
  }
  doc["jumps"] = json::array();
  for (const auto& j : model.jumps()) {
    json terms = json::array();
    for (const auto& t : j.terms) {
      terms.push_back({{"pauli", t.pauli.str()}, {"re", t.coefficient.real()}, {"im", t.coefficient.imag()}});
    }
    doc["jumps"].push_back({{"label", j.label}, {"terms", terms}});
  }
  return doc.dump(2);
}

}  // namespace cerfold
