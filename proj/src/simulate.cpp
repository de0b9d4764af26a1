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

#include "cerfold/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cerfold/errors.hpp"

namespace cerfold {

SpamError SpamError::none(int num_qubits) {
  return {std::vector<double>(static_cast<std::size_t>(num_qubits), 0.0),
          std::vector<double>(static_cast<std::size_t>(num_qubits), 0.0)};
}

void SpamError::validate(int num_qubits) const {
  if (prep.size() != static_cast<std::size_t>(num_qubits) ||
      readout.size() != static_cast<std::size_t>(num_qubits)) {
    throw ConfigError("spam: expected " + std::to_string(num_qubits) + " entries per list");
  }
  for (std::size_t q = 0; q < prep.size(); ++q) {
    if (!(prep[q] >= 0.0 && prep[q] < 0.5) || !(readout[q] >= 0.0 && readout[q] < 0.5)) {
      throw ConfigError("spam: probabilities of qubit " + std::to_string(q) +
                        " must lie in [0, 0.5)");
    }
  }
}

SpamError parse_spam(const std::string& json_text, int num_qubits) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("spam: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("spam: top level must be an object");
  SpamError s = SpamError::none(num_qubits);
  auto read = [&](const char* key, std::vector<double>& dst) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    try {
      if (v.is_number()) {
        std::fill(dst.begin(), dst.end(), v.get<double>());
      } else {
        dst = v.get<std::vector<double>>();
      }
    } catch (const json::exception& e) {
      throw ConfigError(std::string("spam: key '") + key + "' has the wrong type (" + e.what() + ")");
    }
  };
  read("prep", s.prep);
  read("readout", s.readout);
  s.validate(num_qubits);
  return s;
}

SpamError load_spam(const std::string& path, int num_qubits) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spam file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_spam(ss.str(), num_qubits);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(const NoiseModel& noise, std::shared_ptr<const HardCycle> cycle,
                     std::vector<int> measured, SpamError spam)
    : cycle_(std::move(cycle)), measured_(std::move(measured)), spam_(std::move(spam)) {
  if (!cycle_) throw ConfigError("simulator: no hard cycle");
  const int n = noise.num_qubits();
  spam_.validate(n);
  const auto& support = cycle_->support();
  for (int q : support) {
    if (q < 0 || q >= n) {
      throw ConfigError("cycle qubit " + std::to_string(q) + " is outside the " +
                        std::to_string(n) + "-qubit noise model");
    }
  }
  for (int q : measured_) {
    const auto it = std::find(support.begin(), support.end(), q);
    if (it == support.end()) {
      throw ConfigError("measured qubit " + std::to_string(q) + " is outside the cycle support");
    }
    positions_.push_back(static_cast<int>(it - support.begin()));
  }
  const NoiseModel local = restrict(noise, support);
  dropped_ = local.dropped_terms();
  error_ = exponentiate(build_generator(local, support), 1.0);

  const int w = cycle_->num_qubits();
  for (const auto& p : all_paulis(w)) {
    x_masks_.push_back(p.x_mask());
    z_masks_.push_back(p.z_mask());
  }
}

const Eigen::MatrixXd& Simulator::noisy_step(int x) const {
  if (x < 1) throw std::invalid_argument("noisy_step: x must be >= 1");
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto& slot = step_cache_[x];
  if (!slot) {
    const Eigen::MatrixXd n = cycle_->ptm().matrix * error_.matrix;
    Eigen::MatrixXd p = n;
    for (int i = 1; i < x; ++i) p = n * p;
    slot = std::make_unique<Eigen::MatrixXd>(std::move(p));
  }
  return *slot;
}

Eigen::VectorXd Simulator::prepared_state(const SpamBasis& basis) const {
  const int w = cycle_->num_qubits();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(1);
  for (int pos = 0; pos < w; ++pos) {
    Eigen::Vector4d local(1.0, 0.0, 0.0, 1.0);  // |0> on spectators
    const auto it = std::find(positions_.begin(), positions_.end(), pos);
    if (it != positions_.end()) {
      const auto i = static_cast<std::size_t>(it - positions_.begin());
      const int q = measured_[i];
      local.setZero();
      local[0] = 1.0;
      const int digit = basis.label[i] == 'X' ? 1 : (basis.label[i] == 'Y' ? 2 : 3);
      local[digit] = 1.0 - 2.0 * spam_.prep[static_cast<std::size_t>(q)];
    }
    Eigen::VectorXd next(v.size() * 4);
    for (Eigen::Index a = 0; a < v.size(); ++a) next.segment(4 * a, 4) = v[a] * local;
    v = std::move(next);
  }
  return v;
}

double Simulator::readout_factor(const PauliString& marginal) const {
  double f = 1.0;
  for (std::size_t i = 0; i < measured_.size(); ++i) {
    if ((marginal.support_mask() >> i) & 1u) {
      f *= 1.0 - 2.0 * spam_.readout[static_cast<std::size_t>(measured_[i])];
    }
  }
  return f;
}

void Simulator::apply_layer(Eigen::VectorXd& v, const PauliString& layer) const {
  const std::uint32_t gx = layer.x_mask(), gz = layer.z_mask();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (commutation_sign(gx, gz, x_masks_[k], z_masks_[k]) < 0) v[i] = -v[i];
  }
}

Eigen::VectorXd Simulator::outcome_distribution(const CompiledCircuit& circuit) const {
  if (circuit.spec.cycle.get() != cycle_.get() && circuit.spec.cycle->support() != cycle_->support()) {
    throw std::invalid_argument("outcome_distribution: circuit uses a different cycle support");
  }
  if (circuit.measured_positions != positions_) {
    throw std::invalid_argument("outcome_distribution: circuit measures different qubits");
  }
  const int w = cycle_->num_qubits();
  const Eigen::MatrixXd& step = noisy_step(circuit.spec.x);
  Eigen::VectorXd v = prepared_state(circuit.spec.basis);
  for (int k = 0; k < circuit.spec.m; ++k) {
    apply_layer(v, circuit.easy_cycles[static_cast<std::size_t>(k)].pauli);
    v = step * v;
  }
  apply_layer(v, circuit.easy_cycles.back().pauli);

  // Parity expectations of every sub-product of the setting, then the
  // inverse parity transform over the measured bits.
  const int k = static_cast<int>(positions_.size());
  const PauliString setting = circuit.spec.basis.setting();
  const std::size_t outcomes = std::size_t{1} << k;
  std::vector<double> parity(outcomes, 0.0);
  for (std::uint32_t t = 0; t < outcomes; ++t) {
    const PauliString marginal(k, setting.x_mask() & t, setting.z_mask() & t);
    const PauliString local = embed_marginal(marginal, positions_, w);
    parity[t] = v[static_cast<Eigen::Index>(local.index())] * readout_factor(marginal);
  }
  Eigen::VectorXd probs(static_cast<Eigen::Index>(outcomes));
  for (std::uint32_t b = 0; b < outcomes; ++b) {
    double acc = 0.0;
    for (std::uint32_t t = 0; t < outcomes; ++t) {
      acc += (std::popcount(b & t) & 1) ? -parity[t] : parity[t];
    }
    const double p = acc / static_cast<double>(outcomes);
    if (!(p >= -1e-9 && p <= 1.0 + 1e-9)) {
      throw NumericalIntegrityError("outcome probability " + std::to_string(p) +
                                    " outside [0, 1] for x = " + std::to_string(circuit.spec.x) +
                                    ", m = " + std::to_string(circuit.spec.m));
    }
    probs[b] = std::clamp(p, 0.0, 1.0);
  }
  const double total = probs.sum();
  if (!(std::abs(total - 1.0) <= 1e-8)) {
    throw NumericalIntegrityError("outcome distribution sums to " + std::to_string(total));
  }
  return probs / total;
}

OutcomeHistogram Simulator::run(const CompiledCircuit& circuit, std::int64_t shots,
                                std::uint64_t rng_seed) const {
  if (shots < 0) throw std::invalid_argument("run: shots must be >= 0");
  const Eigen::VectorXd probs = outcome_distribution(circuit);
  OutcomeHistogram h{static_cast<int>(positions_.size()),
                     std::vector<double>(static_cast<std::size_t>(probs.size()), 0.0)};
  if (shots == 0) {
    for (Eigen::Index i = 0; i < probs.size(); ++i) h.counts[static_cast<std::size_t>(i)] = probs[i];
    return h;
  }
  // Multinomial draw as a chain of conditional binomials.
  std::mt19937_64 rng(rng_seed);
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (Eigen::Index i = 0; i < probs.size() && remaining > 0; ++i) {
    std::int64_t drawn = remaining;
    if (i + 1 < probs.size()) {
      const double p = mass > 0.0 ? std::clamp(probs[i] / mass, 0.0, 1.0) : 0.0;
      std::binomial_distribution<std::int64_t> binom(remaining, p);
      drawn = binom(rng);
    }
    h.counts[static_cast<std::size_t>(i)] = static_cast<double>(drawn);
    remaining -= drawn;
    mass -= probs[i];
  }
  return h;
}

double Simulator::twirled_mean(int x, int m, const SpamBasis& basis, const PauliString& p) const {
  if (m < 1) throw ConfigError("m must be >= 1");
  const int c = cycle_->cyclicity();
  if (x < 1 || (x - 1) % c != 0) throw ConfigError("x violates x = 1 (mod cyclicity)");
  if (std::find(basis.paulis.begin(), basis.paulis.end(), p) == basis.paulis.end()) {
    throw std::invalid_argument("twirled_mean: Pauli not in basis");
  }
  bool ok = false;
  const SignedPauli residual = cycle_->power_as_pauli(x * m, ok);
  if (!ok) throw ConfigError("C^(x m) is not a Pauli");
  const int w = cycle_->num_qubits();
  const PauliString target = embed_marginal(p, positions_, w);

  // Heisenberg orbit Q_m = P, Q_k = C^-x Q_{k+1} C^x.
  const int back = (c - x % c) % c;
  std::vector<PauliString> orbit(static_cast<std::size_t>(m) + 1);
  orbit.back() = target;
  for (int k = m - 1; k >= 0; --k) {
    orbit[static_cast<std::size_t>(k)] =
        cycle_->conjugate_power({orbit[static_cast<std::size_t>(k) + 1], 0}, back).pauli;
  }
  const Eigen::MatrixXd& step = noisy_step(x);
  const Eigen::VectorXd prep = prepared_state(basis);
  const auto q0 = static_cast<Eigen::Index>(orbit.front().index());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(prep.size());
  v[q0] = prep[q0];
  for (int k = 1; k <= m; ++k) {
    const auto prev = static_cast<Eigen::Index>(orbit[static_cast<std::size_t>(k) - 1].index());
    const auto next = static_cast<Eigen::Index>(orbit[static_cast<std::size_t>(k)].index());
    const double carried = step(next, prev) * v[prev];
    v.setZero();
    v[next] = carried;
  }
  const double value = commutes(residual.pauli, target) *
                       v[static_cast<Eigen::Index>(target.index())] * readout_factor(p);
  return value;
}

std::vector<FidelityRecord> Simulator::records(const CircuitSpec& spec, std::int64_t shots,
                                               SimulationMode mode) const {
  std::vector<FidelityRecord> out;
  if (mode == SimulationMode::kTwirledMean) {
    for (const auto& p : spec.basis.paulis) {
      out.push_back({p, spec.x, spec.m, spec.seed, twirled_mean(spec.x, spec.m, spec.basis, p), 0});
    }
    return out;
  }
  const CompiledCircuit circuit = generate(spec);
  const std::int64_t used = mode == SimulationMode::kExact ? 0 : shots;
  const OutcomeHistogram h = run(circuit, used, counter_hash(spec.seed, 0x5A5A5A5AULL));
  for (const auto& p : spec.basis.paulis) {
    out.push_back({p, spec.x, spec.m, spec.seed, estimate_circuit_fidelity(h, circuit, p), used});
  }
  return out;
}

OutcomeHistogram run(const CompiledCircuit& circuit, const NoiseModel& noise,
                     const SpamError& spam, std::int64_t shots, std::uint64_t rng_seed) {
  const Simulator sim(noise, circuit.spec.cycle, circuit.spec.measured, spam);
  return sim.run(circuit, shots, rng_seed);
}

std::vector<FidelityRecord> run_plan(const std::vector<CircuitSpec>& specs, const NoiseModel& noise,
                                     const SpamError& spam, std::int64_t shots,
                                     SimulationMode mode, int workers) {
  if (specs.empty()) return {};
  if (mode == SimulationMode::kSampled && shots < 1) {
    throw ConfigError("sampled simulation needs shots >= 1");
  }
  for (const auto& s : specs) {
    if (s.cycle.get() != specs.front().cycle.get() || s.measured != specs.front().measured) {
      throw ConfigError("run_plan: all specs must share one hard cycle and measured set");
    }
  }
  const Simulator sim(noise, specs.front().cycle, specs.front().measured, spam);
  std::vector<std::vector<FidelityRecord>> per_spec(specs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(specs.size());

  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        per_spec[i] = sim.records(specs[i], shots, mode);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_workers = std::max(1, workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!errors[i]) continue;
    const auto& s = specs[i];
    const std::string where = "spec " + std::to_string(i) + " (x = " + std::to_string(s.x) +
                              ", m = " + std::to_string(s.m) + ", basis " + s.basis.label +
                              ", replicate " + std::to_string(s.replicate) + "): ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const NumericalIntegrityError& e) {
      throw NumericalIntegrityError(where + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  std::vector<FidelityRecord> out;
  for (auto& v : per_spec) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// ---------------------------------------------------------------------------
// CSV

void write_records_csv(std::ostream& out, const std::vector<FidelityRecord>& records) {
  out << "pauli,x,m,seed,estimate,shots\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.estimate);
    out << r.pauli.str() << ',' << r.x << ',' << r.m << ',' << r.seed << ',' << buf << ','
        << r.shots << '\n';
  }
}

std::string records_to_csv(const std::vector<FidelityRecord>& records) {
  std::ostringstream ss;
  write_records_csv(ss, records);
  return ss.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line, const char* column) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("records CSV line " + std::to_string(line) + ": bad " + column + " '" + s + "'");
  }
  return value;
}

double parse_double(const std::string& s, std::size_t line, const char* column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("records CSV line " + std::to_string(line) + ": bad " + column + " '" + s + "'");
  }
}

}  // namespace

std::vector<FidelityRecord> read_records_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ConfigError("records CSV is empty");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "pauli,x,m,seed,estimate,shots") {
    throw ConfigError("records CSV line 1: expected header 'pauli,x,m,seed,estimate,shots'");
  }
  std::vector<FidelityRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cols = split_csv(line);
    if (cols.size() != 6) {
      throw ConfigError("records CSV line " + std::to_string(line_no) + ": expected 6 columns");
    }
    FidelityRecord r;
    try {
      r.pauli = PauliString::parse(cols[0]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("records CSV line " + std::to_string(line_no) + ": " + e.what());
    }
    r.x = parse_number<int>(cols[1], line_no, "x");
    r.m = parse_number<int>(cols[2], line_no, "m");
    r.seed = parse_number<std::uint64_t>(cols[3], line_no, "seed");
    r.estimate = parse_double(cols[4], line_no, "estimate");
    r.shots = parse_number<std::int64_t>(cols[5], line_no, "shots");
    if (!(r.estimate >= -1.0 && r.estimate <= 1.0)) {
      throw ConfigError("records CSV line " + std::to_string(line_no) + ": estimate outside [-1, 1]");
    }
    if (r.x < 1 || r.m < 1 || r.shots < 0) {
      throw ConfigError("records CSV line " + std::to_string(line_no) + ": x, m must be >= 1");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<FidelityRecord> load_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open records file '" + path + "'");
  try {
    return read_records_csv(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace cerfold
