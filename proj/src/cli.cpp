#include "qdsim/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace qdsim::cli {
namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

std::string bits_to_string(const std::vector<int>& bits) {
  std::string out;
  for (int b : bits) out += (b ? '1' : '0');
  return out;
}

NoiseCode code_from_string(const std::string& s) {
  if (s == "dephasing") return NoiseCode::Dephasing;
  if (s == "rotation") return NoiseCode::Rotation;
  throw std::invalid_argument("protocol.code: expected \"dephasing\" or \"rotation\"");
}

DriftPolicy drift_from_string(const std::string& s) {
  if (s == "per_block") return DriftPolicy::PerBlock;
  if (s == "per_logical_qubit") return DriftPolicy::PerLogicalQubit;
  throw std::invalid_argument(
      "noise.drift: expected \"per_block\" or \"per_logical_qubit\"");
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("complex values are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

AmpVector vector_from_json(const Json& j) {
  AmpVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  }
  return v;
}

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

constexpr std::array<const char*, 4> kPairKeys = {"hh", "hv", "vh", "vv"};

EMParams em_params_from_json(const Json& j) {
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "identity") return EMParams::identity_attack();
    if (preset == "orthogonal") return EMParams::orthogonal_attack();
    throw std::invalid_argument(
        "attack.params.preset: expected \"identity\" or \"orthogonal\"");
  }
  EMParams p;
  p.ancilla_dim = j.at("ancilla_dim").get<int>();
  for (int i = 0; i < 4; ++i) {
    p.alpha[i] = complex_from_json(j.at("alpha").at(kPairKeys[i]));
    p.beta[i] = complex_from_json(j.at("beta").at(kPairKeys[i]));
    p.alpha_ancilla[i] = vector_from_json(j.at("alpha_ancillas").at(kPairKeys[i]));
    p.beta_ancilla[i] = vector_from_json(j.at("beta_ancillas").at(kPairKeys[i]));
  }
  return p;
}

Json em_params_to_json(const EMParams& p) {
  Json alpha, beta, alpha_anc, beta_anc;
  for (int i = 0; i < 4; ++i) {
    alpha[kPairKeys[i]] = complex_to_json(p.alpha[i]);
    beta[kPairKeys[i]] = complex_to_json(p.beta[i]);
    Json av = Json::array(), bv = Json::array();
    for (Eigen::Index t = 0; t < p.alpha_ancilla[i].size(); ++t) {
      av.push_back(complex_to_json(p.alpha_ancilla[i](t)));
      bv.push_back(complex_to_json(p.beta_ancilla[i](t)));
    }
    alpha_anc[kPairKeys[i]] = av;
    beta_anc[kPairKeys[i]] = bv;
  }
  return Json{{"ancilla_dim", p.ancilla_dim},
              {"alpha", alpha},
              {"beta", beta},
              {"alpha_ancillas", alpha_anc},
              {"beta_ancillas", beta_anc}};
}

Json check_to_json(const CheckResult& r) {
  return Json{{"decoys", r.decoys},
              {"mismatches", r.mismatches},
              {"error_rate", r.error_rate},
              {"vacuous", r.vacuous},
              {"aborted", r.aborted}};
}

Json fraction_to_json(const Fraction& f) {
  return Json{{"num", f.num}, {"den", f.den}, {"value", f.value()}};
}

Json leakage_to_json(const LeakageReport& r) {
  Json table = Json::array();
  for (const auto& row : r.posterior_table) {
    table.push_back(Json{{"announcement", to_string(row.announcement)},
                         {"p_ki", row.p_ki}});
  }
  return Json{{"mode", r.mode == LeakageMode::Exhaustive ? "exhaustive" : "monte_carlo"},
              {"entropy_bits", r.entropy_bits},
              {"std_error", r.std_error},
              {"samples", r.samples},
              {"posterior_table", table}};
}

void flatten(const Json& node, const std::string& prefix,
             std::vector<std::string>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      flatten(node[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out.push_back(prefix + "," + node.dump());
  }
}

}  // namespace

std::vector<std::string> RunConfig::violations() const {
  std::vector<std::string> out = protocol.violations();
  if (trials < 1) out.push_back("run.trials: must be >= 1");
  if (format != "doc" && format != "table") {
    out.push_back("run.format: expected \"doc\" or \"table\"");
  }
  try {
    attack.validate(protocol.code);
  } catch (const std::exception& e) {
    out.push_back(std::string("attack: ") + e.what());
  }
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i].trials < 1) {
      out.push_back("sweep[" + std::to_string(i) + "].trials: must be >= 1");
    }
    try {
      sweep[i].attack.validate(protocol.code);
    } catch (const std::exception& e) {
      out.push_back("sweep[" + std::to_string(i) + "].attack: " + e.what());
    }
  }
  return out;
}

AttackModel attack_from_json(const Json& doc) {
  AttackModel attack;
  const std::string type = doc.value("type", "none");
  if (type == "none") {
    attack.kind = AttackKind::None;
  } else if (type == "intercept_resend") {
    attack.kind = AttackKind::InterceptResend;
  } else if (type == "measure_resend") {
    attack.kind = AttackKind::MeasureResend;
  } else if (type == "entangle_measure") {
    attack.kind = AttackKind::EntangleMeasure;
  } else if (type == "ce") {
    attack.kind = AttackKind::CEAttack;
  } else {
    throw std::invalid_argument("attack.type: unknown attack \"" + type + "\"");
  }
  const std::string target = doc.value("target", "first");
  if (target == "first") {
    attack.target = AttackTarget::FirstTransmission;
  } else if (target == "second") {
    attack.target = AttackTarget::SecondTransmission;
  } else if (target == "both") {
    attack.target = AttackTarget::Both;
  } else {
    throw std::invalid_argument("attack.target: expected first, second, or both");
  }
  if (attack.kind == AttackKind::EntangleMeasure) {
    attack.em = em_params_from_json(
        doc.contains("params") ? doc.at("params") : Json{{"preset", "orthogonal"}});
  }
  return attack;
}

Json attack_to_json(const AttackModel& attack) {
  Json out{{"type", to_string(attack.kind)}, {"target", to_string(attack.target)}};
  if (attack.em.has_value()) out["params"] = em_params_to_json(*attack.em);
  return out;
}

RunConfig parse_run_config(const Json& doc) {
  RunConfig config;
  const Json protocol = doc.value("protocol", Json::object());
  config.protocol.code = code_from_string(protocol.value("code", "dephasing"));
  config.protocol.message_bits = protocol.value("n", 1);
  config.protocol.first_check_decoys = protocol.value("delta1", 0);
  config.protocol.second_check_decoys = protocol.value("delta2", 0);

  const Json noise = doc.value("noise", Json::object());
  config.protocol.noise.code = config.protocol.code;
  config.protocol.noise.enabled = noise.value("enabled", true);
  config.protocol.noise.drift =
      drift_from_string(noise.value("drift", "per_logical_qubit"));

  const Json check = doc.value("check", Json::object());
  config.protocol.abort_threshold = check.value("abort_threshold", 0.0);

  if (doc.contains("attack")) config.attack = attack_from_json(doc.at("attack"));

  const Json run = doc.value("run", Json::object());
  config.trials = run.value("trials", std::int64_t{1000});
  config.protocol.seed = run.value("seed", std::uint64_t{0});
  config.output_path = run.value("output", std::string{});
  config.format = run.value("format", std::string{"doc"});

  if (doc.contains("sweep")) {
    for (const Json& row : doc.at("sweep")) {
      SweepRow sweep_row;
      sweep_row.attack = attack_from_json(row.value("attack", Json::object()));
      sweep_row.trials = row.value("trials", config.trials);
      config.sweep.push_back(std::move(sweep_row));
    }
  }
  return config;
}

RunConfig load_run_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot read config file: " + path);
  }
  Json doc = Json::parse(in);
  RunConfig config = parse_run_config(doc);
  if (overrides.seed) config.protocol.seed = *overrides.seed;
  if (overrides.trials) config.trials = *overrides.trials;
  if (overrides.format) config.format = *overrides.format;
  if (overrides.output_path) config.output_path = *overrides.output_path;
  return config;
}

Json config_to_json(const RunConfig& config) {
  return Json{
      {"protocol",
       {{"code", to_string(config.protocol.code)},
        {"n", config.protocol.message_bits},
        {"delta1", config.protocol.first_check_decoys},
        {"delta2", config.protocol.second_check_decoys}}},
      {"noise",
       {{"enabled", config.protocol.noise.enabled},
        {"drift", config.protocol.noise.drift == DriftPolicy::PerBlock
                      ? "per_block"
                      : "per_logical_qubit"}}},
      {"check", {{"abort_threshold", config.protocol.abort_threshold}}},
      {"attack", attack_to_json(config.attack)},
      {"run",
       {{"trials", config.trials},
        {"seed", config.protocol.seed},
        {"output", config.output_path},
        {"format", config.format}}}};
}

Json report_skeleton(const RunConfig& config) {
  Json config_echo = config_to_json(config);
  Json report;
  report["schema_version"] = 1;
  report["config"] = config_echo;
  report["seed"] = config.protocol.seed;
  report["run_id"] = hex64(
      fnv1a64(config_echo.dump() + ":" + std::to_string(config.protocol.seed)));
  report["results"] = Json::object();
  return report;
}

std::string report_to_table(const Json& report) {
  std::vector<std::string> rows;
  flatten(report, "", rows);
  std::string out = "key,value\n";
  for (const auto& row : rows) {
    out += row;
    out += '\n';
  }
  return out;
}

void emit_report(const RunConfig& config, const Json& report) {
  const std::string body =
      config.format == "table" ? report_to_table(report) : report.dump(2) + "\n";
  if (config.output_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(config.output_path);
  if (!out) {
    throw std::runtime_error("cannot write report to " + config.output_path);
  }
  out << body;
}

namespace {

int load_or_fail(const std::string& config_path, const Overrides& overrides,
                 RunConfig& config) {
  try {
    config = load_run_config(config_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const auto violations = config.violations();
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << "config error: " << v << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}

Json detection_to_json(const DetectionEstimate& est) {
  return Json{{"trials", est.trials},
              {"detections", est.detections},
              {"estimate", est.estimate},
              {"half_width", est.half_width},
              {"wilson_lower", est.interval.lower},
              {"wilson_upper", est.interval.upper}};
}

}  // namespace

int cmd_simulate(const std::string& config_path, const Overrides& overrides) {
  RunConfig config;
  if (const int rc = load_or_fail(config_path, overrides, config); rc != kExitOk) {
    return rc;
  }

  const auto start = std::chrono::steady_clock::now();
  Json report = report_skeleton(config);
  try {
    const std::size_t rounds =
        static_cast<std::size_t>(config.protocol.message_bits);
    Rng k_rng = Rng::derive(config.protocol.seed, 0x6b);
    Rng i_rng = Rng::derive(config.protocol.seed, 0x69);
    std::vector<int> k_bits(rounds), i_bits(rounds);
    for (auto& b : k_bits) b = k_rng.next_bit();
    for (auto& b : i_bits) b = i_rng.next_bit();

    DialogueResult result =
        run_dialogue(config.protocol, k_bits, i_bits, config.attack);

    int k_matches = 0, i_matches = 0;
    for (std::size_t n = 0; n < result.k_decoded.size(); ++n) {
      if (result.k_decoded[n] == k_bits[n]) ++k_matches;
      if (result.i_decoded[n] == i_bits[n]) ++i_matches;
    }
    Json dialogue{{"aborted", result.aborted},
                  {"abort_stage", result.abort_stage},
                  {"first_check", check_to_json(result.first_check)},
                  {"second_check", check_to_json(result.second_check)},
                  {"rounds", config.protocol.message_bits},
                  {"k_sent", bits_to_string(result.k_sent)},
                  {"i_sent", bits_to_string(result.i_sent)},
                  {"k_decoded", bits_to_string(result.k_decoded)},
                  {"i_decoded", bits_to_string(result.i_decoded)},
                  {"k_matches", k_matches},
                  {"i_matches", i_matches},
                  {"transcript", result.transcript.lines()}};
    report["results"]["dialogue"] = dialogue;

    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["duration_seconds"] =
        std::chrono::duration<double>(elapsed).count();
    emit_report(config, report);
    return result.aborted ? kExitAbort : kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

int cmd_attack_sweep(const std::string& config_path, const Overrides& overrides) {
  RunConfig config;
  if (const int rc = load_or_fail(config_path, overrides, config); rc != kExitOk) {
    return rc;
  }

  std::vector<SweepRow> rows = config.sweep;
  if (rows.empty()) {
    rows.push_back({AttackModel::none(), config.trials});
    rows.push_back({AttackModel::intercept_resend(), config.trials});
    rows.push_back({AttackModel::measure_resend(), config.trials});
    rows.push_back(
        {AttackModel::entangle_measure(EMParams::orthogonal_attack()),
         config.trials});
    rows.push_back({AttackModel::ce_attack(), config.trials});
  }

  const auto start = std::chrono::steady_clock::now();
  Json report = report_skeleton(config);
  try {
    Json row_reports = Json::array();
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
      const SweepRow& row = rows[idx];
      Json entry = {{"attack", attack_to_json(row.attack)},
                    {"trials", row.trials}};

      Rng detect_rng = Rng::derive(config.protocol.seed, 1000 + 2 * idx);
      entry["detection"] =
          detection_to_json(estimate_detection(row.attack, config.protocol,
                                               row.trials, detect_rng));
      try {
        entry["detection"]["exhaustive"] =
            fraction_to_json(exhaustive_detection(row.attack, config.protocol.code));
      } catch (const std::invalid_argument&) {
        entry["detection"]["exhaustive"] = nullptr;
      }

      Rng leak_rng = Rng::derive(config.protocol.seed, 1001 + 2 * idx);
      try {
        entry["leakage"] = leakage_to_json(empirical_leakage(
            row.attack, config.protocol, row.trials, leak_rng));
      } catch (const std::runtime_error& e) {
        entry["leakage"] = nullptr;
        entry["leakage_note"] = e.what();
      }
      row_reports.push_back(std::move(entry));
    }
    report["results"]["attacks"] = row_reports;
    report["results"]["leakage_exhaustive"] = {
        {"dephasing",
         leakage_to_json(leakage_entropy_exhaustive(NoiseCode::Dephasing))},
        {"rotation",
         leakage_to_json(leakage_entropy_exhaustive(NoiseCode::Rotation))}};
    const auto this_work = cabello_efficiency(ProtocolKind::ThisWork);
    const auto comparator = cabello_efficiency(ProtocolKind::SingleAnnouncementComparator);
    report["results"]["efficiency"] = {
        {"this_work",
         {{"secret_bits", this_work.secret_bits},
          {"qubits_used", this_work.qubits_used},
          {"classical_bits", this_work.classical_bits},
          {"eta", fraction_to_json(this_work.eta)}}},
        {"comparator",
         {{"secret_bits", comparator.secret_bits},
          {"qubits_used", comparator.qubits_used},
          {"classical_bits", comparator.classical_bits},
          {"eta", fraction_to_json(comparator.eta)}}}};

    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["duration_seconds"] =
        std::chrono::duration<double>(elapsed).count();
    emit_report(config, report);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

namespace {

bool selftest_decode_enumeration() {
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    for (int lab = 0; lab < 4; ++lab) {
      for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
          Rng rng(1234);
          const LogicalLabel initial = label_from_index(lab);
          ItemState lead{logical_vector(code, initial), 0};
          ItemState twin{logical_vector(code, initial), 0};
          apply_pair_gate(lead, composite_unitary(code, k));
          apply_pair_gate(lead, composite_unitary(code, i));
          const auto announced = measure_item(lead, code, initial.basis, rng);
          if (!announced) return false;
          const int k_hat = announced->bit ^ initial.bit ^ i;
          const auto twin_label = measure_item(twin, code, announced->basis, rng);
          if (!twin_label) return false;
          const int i_hat = announced->bit ^ twin_label->bit ^ k;
          if (k_hat != k || i_hat != i) return false;
        }
      }
    }
  }
  return true;
}

bool selftest_flip_algebra() {
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    const GateMatrix flip = composite_unitary(code, 1);
    const int targets[2] = {0, 1};
    const auto expect = [&](LogicalLabel in, LogicalLabel out, double sign) {
      const StateVector got =
          apply_gate(logical_vector(code, in), flip, targets);
      const AmpVector want = sign * logical_vector(code, out).amplitudes();
      return (got.amplitudes() - want).cwiseAbs().maxCoeff() <= 1e-12;
    };
    if (!expect({LogicalBasis::Z, 0}, {LogicalBasis::Z, 1}, 1.0)) return false;
    if (!expect({LogicalBasis::Z, 1}, {LogicalBasis::Z, 0}, -1.0)) return false;
    if (!expect({LogicalBasis::X, 0}, {LogicalBasis::X, 1}, -1.0)) return false;
    if (!expect({LogicalBasis::X, 1}, {LogicalBasis::X, 0}, 1.0)) return false;
    // Twice = -identity on the logical space.
    for (int lab = 0; lab < 4; ++lab) {
      const StateVector s = logical_vector(code, label_from_index(lab));
      const StateVector twice = apply_gate(apply_gate(s, flip, targets), flip, targets);
      if ((twice.amplitudes() + s.amplitudes()).cwiseAbs().maxCoeff() > 1e-12) {
        return false;
      }
    }
  }
  return true;
}

bool selftest_dfs_invariance() {
  Rng rng(99);
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    NoiseModel model{code, true, DriftPolicy::PerLogicalQubit};
    for (int trial = 0; trial < 1000; ++trial) {
      const double parameter = sample_noise_parameter(model, rng);
      for (int lab = 0; lab < 4; ++lab) {
        const StateVector s = logical_vector(code, label_from_index(lab));
        if (fidelity(apply_collective_noise(s, code, parameter), s) <
            1.0 - 1e-12) {
          return false;
        }
      }
    }
  }
  return true;
}

bool selftest_collectivity() {
  // Superposition states survive the transmit path only when both photons of
  // a pair share one noise parameter.
  Rng rng(7);
  for (NoiseCode code : {NoiseCode::Dephasing, NoiseCode::Rotation}) {
    NoiseModel model{code, true, DriftPolicy::PerLogicalQubit};
    for (int trial = 0; trial < 200; ++trial) {
      TransmissionBatch batch;
      for (int lab = 0; lab < 4; ++lab) {
        batch.append(logical_state(code, label_from_index(lab)),
                     QubitRole::MessageLead);
      }
      batch = transmit(std::move(batch), model, nullptr, rng);
      for (int lab = 0; lab < 4; ++lab) {
        const StateVector expected = logical_vector(code, label_from_index(lab));
        if (fidelity(batch.at(static_cast<std::size_t>(lab)).item->state,
                     expected) < 1.0 - 1e-12) {
          return false;
        }
      }
    }
  }
  return true;
}

bool selftest_ce_ancilla() {
  Rng rng(5);
  for (int lab = 0; lab < 4; ++lab) {
    const StateVector input =
        logical_vector(NoiseCode::Dephasing, label_from_index(lab));
    TransmissionBatch batch;
    batch.append(logical_state(NoiseCode::Dephasing, label_from_index(lab)),
                 QubitRole::MessageLead);
    auto [out, record] = ce_attack(std::move(batch), rng);
    const StateVector& joint = out.at(0).item->state;
    // Joint must factor as (input pair) x |V>.
    for (int pb = 0; pb < 4; ++pb) {
      const Complex at_h = joint.amplitude(static_cast<std::uint64_t>(2 * pb));
      const Complex at_v = joint.amplitude(static_cast<std::uint64_t>(2 * pb + 1));
      if (std::abs(at_h) > 1e-12) return false;
      if (std::abs(at_v - input.amplitude(static_cast<std::uint64_t>(pb))) > 1e-12) {
        return false;
      }
    }
  }
  return true;
}

bool selftest_leakage() {
  return leakage_entropy_exhaustive(NoiseCode::Dephasing).entropy_bits == 2.0 &&
         leakage_entropy_exhaustive(NoiseCode::Rotation).entropy_bits == 2.0;
}

bool selftest_efficiency() {
  const auto ours = cabello_efficiency(ProtocolKind::ThisWork);
  const auto ref = cabello_efficiency(ProtocolKind::SingleAnnouncementComparator);
  return ours.eta == Fraction{1, 3} && ref.eta == Fraction{2, 5};
}

}  // namespace

int cmd_selftest() {
  const std::vector<std::pair<const char*, std::function<bool()>>> items = {
      {"decode-enumeration", selftest_decode_enumeration},
      {"flip-algebra", selftest_flip_algebra},
      {"dfs-invariance", selftest_dfs_invariance},
      {"collectivity", selftest_collectivity},
      {"ce-ancilla", selftest_ce_ancilla},
      {"leakage-exhaustive", selftest_leakage},
      {"efficiency", selftest_efficiency},
  };
  bool all_pass = true;
  for (const auto& [name, fn] : items) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::cout << "fail " << name << " (" << e.what() << ")\n";
      all_pass = false;
      continue;
    }
    std::cout << (ok ? "pass " : "fail ") << name << "\n";
    all_pass = all_pass && ok;
  }
  return all_pass ? kExitOk : kExitSelftestFailure;
}

}  // namespace qdsim::cli
