#include "dqd/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dqd/error.hpp"
#include "dqd/gates.hpp"

namespace dqd::scheduler {

using nlohmann::json;

namespace {

constexpr double kTimeTol = 1e-9;

// A qubit's pulse in one merged segment, remembering where it came from.
struct Cell {
  enum class Kind { Idle, Fixed, Param };
  Kind kind = Kind::Idle;
  double value = 0.0;
  std::size_t param = 0;
};

struct ResolvedOp {
  ansatz::AnsatzSpec spec;
  ansatz::ParamVector values;
  std::string gate;
  std::vector<int> qubits;  // sorted
  bool dynamic = false;
  std::size_t param_offset = 0;
};

struct Layout {
  int n_qubits = 1;
  int n_slots = 0;
  std::vector<Placement> placements;
  std::vector<double> durations;
  std::vector<std::vector<Cell>> cells;
  std::size_t n_dynamic_params = 0;
};

std::string swapped_orientation(const std::string& name) {
  if (name == "CX_01") return "CX_10";
  if (name == "CX_10") return "CX_01";
  if (name == "CZ") return "CZ";
  return {};
}

std::vector<ResolvedOp> resolve(const CircuitIR& ir, const library::GateLibrary& lib) {
  ir.check();
  std::vector<ResolvedOp> out;
  std::size_t offset = 0;
  for (const auto& op : ir.ops) {
    ResolvedOp r;
    r.qubits = op.qubits;
    std::sort(r.qubits.begin(), r.qubits.end());
    const int arity = static_cast<int>(op.qubits.size());
    if (op.params) {
      r.spec = dynamic_template(arity);
      r.values = *op.params;
      ansatz::check_params(r.spec, r.values);
      r.gate = op.gate;
      r.dynamic = true;
      r.param_offset = offset;
      offset += r.values.size();
    } else {
      std::string name = gates::canonical_name(op.gate);
      if (arity == 2 && op.qubits[0] > op.qubits[1]) {
        const auto flipped = swapped_orientation(name);
        if (flipped.empty())
          throw ValidationError("gate '" + op.gate + "' has no stored reversed orientation");
        name = flipped;
      }
      const auto* g = lib.find(name);
      if (!g) throw std::invalid_argument("gate '" + op.gate + "' is missing from the library");
      if (g->arity != arity)
        throw ValidationError("gate '" + op.gate + "' applied to the wrong number of qubits");
      r.spec = g->spec;
      r.values = g->params;
      r.gate = name;
    }
    if (std::abs(r.spec.total_duration() - library::kGateDuration) > kTimeTol)
      throw StructuralError("gate '" + op.gate + "' does not fill a 6 pi slot");
    out.push_back(std::move(r));
  }
  return out;
}

Layout lay_out(const CircuitIR& ir, const library::GateLibrary& lib) {
  const auto ops = resolve(ir, lib);
  const int n = ir.n_qubits;
  const double slot_len = library::kGateDuration;
  Layout layout;
  layout.n_qubits = n;

  // pulsed[s][q]: qubit q is driven during slot s.
  std::vector<std::vector<bool>> pulsed;
  std::vector<int> next_free(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<std::size_t>> slot_ops;

  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& qs = ops[i].qubits;
    int s = 0;
    for (int q : qs) s = std::max(s, next_free[static_cast<std::size_t>(q)]);
    auto blocked = [&](int slot) {
      if (slot >= static_cast<int>(pulsed.size())) return false;
      const auto& row = pulsed[static_cast<std::size_t>(slot)];
      for (int q : qs) {
        for (int nb : {q - 1, q, q + 1}) {
          if (nb < 0 || nb >= n) continue;
          if (nb != q && std::find(qs.begin(), qs.end(), nb) != qs.end()) continue;
          if (row[static_cast<std::size_t>(nb)]) return true;
        }
      }
      return false;
    };
    while (blocked(s)) ++s;
    while (static_cast<int>(pulsed.size()) <= s) {
      pulsed.emplace_back(static_cast<std::size_t>(n), false);
      slot_ops.emplace_back();
    }
    for (int q : qs) {
      pulsed[static_cast<std::size_t>(s)][static_cast<std::size_t>(q)] = true;
      next_free[static_cast<std::size_t>(q)] = s + 1;
    }
    slot_ops[static_cast<std::size_t>(s)].push_back(i);
    layout.placements.push_back(
        {i, ops[i].gate, ir.ops[i].qubits, s, s * slot_len, (s + 1) * slot_len});
  }
  layout.n_slots = static_cast<int>(pulsed.size());
  for (const auto& op : ops)
    if (op.dynamic) layout.n_dynamic_params += op.values.size();

  for (int s = 0; s < layout.n_slots; ++s) {
    const auto& here = slot_ops[static_cast<std::size_t>(s)];
    // Slice end times of every op in the slot.
    std::vector<std::vector<double>> ends(here.size());
    std::vector<double> cuts{0.0, slot_len};
    for (std::size_t k = 0; k < here.size(); ++k) {
      double t = 0.0;
      for (const auto& slice : ops[here[k]].spec.slices()) {
        t += slice.dt;
        ends[k].push_back(t);
        cuts.push_back(std::min(t, slot_len));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> merged{0.0};
    for (double c : cuts) {
      if (c - merged.back() <= kTimeTol) continue;
      merged.push_back(c);
    }
    if (slot_len - merged.back() <= kTimeTol) merged.back() = slot_len;

    for (std::size_t m = 0; m + 1 < merged.size(); ++m) {
      const double mid = 0.5 * (merged[m] + merged[m + 1]);
      std::vector<Cell> row(static_cast<std::size_t>(n));
      for (std::size_t k = 0; k < here.size(); ++k) {
        const auto& op = ops[here[k]];
        const auto idx = static_cast<std::size_t>(
            std::upper_bound(ends[k].begin(), ends[k].end(), mid) - ends[k].begin());
        const auto& slice = op.spec.slices().at(std::min(idx, ends[k].size() - 1));
        for (const auto& slot : slice.slots) {
          if (slot.kind == ansatz::Slot::Kind::Idle) continue;
          auto place = [&](int local, const ansatz::Binding& b) {
            Cell c;
            if (b.kind == ansatz::Binding::Kind::Fixed) {
              c.kind = Cell::Kind::Fixed;
              c.value = b.value;
            } else if (op.dynamic) {
              c.kind = Cell::Kind::Param;
              c.param = op.param_offset + b.index;
              c.value = op.values[b.index];
            } else {
              c.kind = Cell::Kind::Fixed;
              c.value = op.values[b.index];
            }
            row[static_cast<std::size_t>(op.qubits[0] + local)] = c;
          };
          place(slot.qubit, slot.first);
          if (slot.kind == ansatz::Slot::Kind::TwoQubit) place(slot.qubit + 1, slot.second);
        }
      }
      layout.durations.push_back(merged[m + 1] - merged[m]);
      layout.cells.push_back(std::move(row));
    }
  }
  return layout;
}

ComplexMatrix swap_conjugate(const ComplexMatrix& u) {
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1;
  return swap * u * swap;
}

ComplexMatrix embed_block(const ComplexMatrix& u, int first, int n) {
  const int width = u.rows() == 2 ? 1 : 2;
  const Eigen::Index left = Eigen::Index{1} << first;
  const Eigen::Index right = Eigen::Index{1} << (n - first - width);
  return kron(kron(ComplexMatrix::Identity(left, left), u), ComplexMatrix::Identity(right, right));
}

bool contains(const std::vector<int>& v, int q) { return std::find(v.begin(), v.end(), q) != v.end(); }

}  // namespace

void CircuitIR::check() const {
  if (n_qubits < 1) throw ValidationError("circuit needs at least one qubit");
  if (n_qubits > kMaxQubits) throw CapacityError("circuit exceeds the 5-qubit simulator limit");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    std::ostringstream where;
    where << "op " << i << " (" << op.gate << ")";
    if (op.qubits.empty() || op.qubits.size() > 2)
      throw ValidationError(where.str() + ": ops act on one or two qubits");
    for (int q : op.qubits)
      if (q < 0 || q >= n_qubits) throw ValidationError(where.str() + ": qubit out of range");
    if (op.qubits.size() == 2) {
      if (op.qubits[0] == op.qubits[1]) throw ValidationError(where.str() + ": repeated qubit");
      if (std::abs(op.qubits[0] - op.qubits[1]) != 1)
        throw ValidationError(where.str() + ": two-qubit ops must act on nearest neighbours");
    }
  }
}

double Schedule::makespan() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

int Schedule::n_slots() const { return static_cast<int>(std::lround(makespan() / slot_duration)); }

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

ansatz::AnsatzSpec dynamic_template(int arity) {
  if (arity == 1) return ansatz::single_qubit_ansatz();
  if (arity == 2) return ansatz::two_qubit_ansatz();
  throw ValidationError("dynamic ops act on one or two qubits");
}

Schedule schedule(const CircuitIR& ir, const library::GateLibrary& lib) {
  auto layout = lay_out(ir, lib);
  Schedule s;
  s.n_qubits = ir.n_qubits;
  s.placements = std::move(layout.placements);
  for (std::size_t m = 0; m < layout.durations.size(); ++m) {
    model::PulseSegment seg;
    seg.duration = layout.durations[m];
    for (const auto& c : layout.cells[m]) {
      if (c.kind == Cell::Kind::Idle)
        seg.pulses.emplace_back();
      else
        seg.pulses.emplace_back(c.value);
    }
    s.segments.push_back(std::move(seg));
  }
  return s;
}

std::pair<ansatz::AnsatzSpec, ansatz::ParamVector> parametrize(const CircuitIR& ir,
                                                               const library::GateLibrary& lib) {
  const auto layout = lay_out(ir, lib);
  ansatz::ParamVector values(layout.n_dynamic_params, 0.0);
  std::vector<ansatz::Slice> slices;
  for (std::size_t m = 0; m < layout.durations.size(); ++m) {
    ansatz::Slice slice;
    slice.dt = layout.durations[m];
    for (int q = 0; q < layout.n_qubits; ++q) {
      const auto& c = layout.cells[m][static_cast<std::size_t>(q)];
      switch (c.kind) {
        case Cell::Kind::Idle:
          slice.slots.push_back(ansatz::Slot::idle(q));
          break;
        case Cell::Kind::Fixed:
          slice.slots.push_back(ansatz::Slot::one(q, ansatz::Binding::fixed(c.value)));
          break;
        case Cell::Kind::Param:
          slice.slots.push_back(ansatz::Slot::one(q, ansatz::Binding::param(c.param)));
          values[c.param] = c.value;
          break;
      }
    }
    slices.push_back(std::move(slice));
  }
  return {ansatz::AnsatzSpec(layout.n_qubits, std::move(slices)), std::move(values)};
}

CircuitIR with_dynamic_params(CircuitIR ir, const ansatz::ParamVector& flat) {
  std::size_t offset = 0;
  for (auto& op : ir.ops) {
    if (!op.params) continue;
    const auto n = op.params->size();
    if (offset + n > flat.size()) throw ValidationError("too few dynamic parameters");
    op.params->assign(flat.begin() + static_cast<long>(offset),
                      flat.begin() + static_cast<long>(offset + n));
    offset += n;
  }
  if (offset != flat.size()) throw ValidationError("too many dynamic parameters");
  return ir;
}

VerifyReport verify_schedule(const Schedule& s, std::optional<double> j_max) {
  VerifyReport report;
  const int n = s.n_qubits;
  const double slot_len = s.slot_duration;
  Check durations{"segment_durations", true, {}};
  Check signs{"non_negative_pulses", true, {}};
  Check alignment{"slot_alignment", true, {}};
  Check adjacency{"adjacency_exclusion", true, {}};
  Check idles{"idle_pi_multiples", true, {}};
  auto fail = [](Check& c, std::string msg) {
    c.passed = false;
    c.violations.push_back(std::move(msg));
  };

  if (n < 1 || n > kMaxQubits) fail(alignment, "qubit count out of range");
  if (!(slot_len > 0.0) || !ansatz::is_pi_multiple(slot_len))
    fail(alignment, "slot duration must be a positive multiple of pi");

  std::vector<double> starts;
  double t = 0.0;
  for (std::size_t m = 0; m < s.segments.size(); ++m) {
    const auto& seg = s.segments[m];
    starts.push_back(t);
    if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
      std::ostringstream os;
      os << "segment " << m << " has non-positive duration " << seg.duration;
      fail(durations, os.str());
    }
    if (static_cast<int>(seg.pulses.size()) != n) {
      std::ostringstream os;
      os << "segment " << m << " lists " << seg.pulses.size() << " pulses for " << n << " qubits";
      fail(alignment, os.str());
    }
    for (std::size_t q = 0; q < seg.pulses.size(); ++q) {
      if (seg.pulses[q] && (!std::isfinite(*seg.pulses[q]) || *seg.pulses[q] < 0.0)) {
        std::ostringstream os;
        os << "segment " << m << " qubit " << q << " has pulse " << *seg.pulses[q];
        fail(signs, os.str());
      }
    }
    if (j_max) {
      for (auto& w : model::pulse_bound_warnings(seg, {std::max(n, 1), j_max}))
        report.warnings.push_back("segment " + std::to_string(m) + ": " + w);
    }
    t += std::max(seg.duration, 0.0);
  }
  const double makespan = t;
  if (!ansatz::is_pi_multiple(makespan)) fail(alignment, "makespan is not a multiple of pi");

  for (std::size_t p = 0; p < s.placements.size(); ++p) {
    const auto& pl = s.placements[p];
    std::ostringstream where;
    where << "placement " << p << " (" << pl.gate << ")";
    const double expect = pl.slot * slot_len;
    if (std::abs(pl.start - expect) > kTimeTol * std::max(1.0, expect) ||
        std::abs(pl.end - pl.start - slot_len) > kTimeTol * std::max(1.0, pl.end))
      fail(alignment, where.str() + " is not aligned to its slot");
    if (pl.end > makespan + kTimeTol * std::max(1.0, makespan))
      fail(alignment, where.str() + " extends past the schedule");
    for (int q : pl.qubits)
      if (q < 0 || q >= n) fail(alignment, where.str() + " names an out-of-range qubit");
    for (std::size_t o = 0; o < p; ++o) {
      const auto& other = s.placements[o];
      if (other.slot != pl.slot) continue;
      for (int q : pl.qubits)
        if (contains(other.qubits, q)) fail(alignment, where.str() + " overlaps another placement");
    }
  }

  auto owner = [&](double mid, int q) -> const Placement* {
    for (const auto& pl : s.placements)
      if (mid > pl.start && mid < pl.end && contains(pl.qubits, q)) return &pl;
    return nullptr;
  };

  for (std::size_t m = 0; m < s.segments.size(); ++m) {
    const auto& seg = s.segments[m];
    if (static_cast<int>(seg.pulses.size()) != n) continue;
    const double mid = starts[m] + 0.5 * seg.duration;
    for (int q = 0; q < n; ++q) {
      if (seg.pulses[static_cast<std::size_t>(q)] && !owner(mid, q)) {
        std::ostringstream os;
        os << "segment " << m << " pulses qubit " << q << " outside any placement";
        fail(alignment, os.str());
      }
    }
    for (int q = 0; q + 1 < n; ++q) {
      if (!seg.pulses[static_cast<std::size_t>(q)] || !seg.pulses[static_cast<std::size_t>(q + 1)])
        continue;
      const auto* a = owner(mid, q);
      if (a == nullptr || !contains(a->qubits, q + 1)) {
        std::ostringstream os;
        os << "segment " << m << " pulses adjacent qubits " << q << " and " << q + 1
           << " of different operations";
        fail(adjacency, os.str());
      }
    }
  }

  for (int q = 0; q < n; ++q) {
    double run = 0.0;
    double run_start = 0.0;
    auto close = [&](double at) {
      if (run > 0.0 && !ansatz::is_pi_multiple(run)) {
        std::ostringstream os;
        os << "qubit " << q << " idles for " << run / kPi << " pi starting at t = " << run_start;
        fail(idles, os.str());
      }
      run = 0.0;
      run_start = at;
    };
    for (std::size_t m = 0; m < s.segments.size(); ++m) {
      const auto& seg = s.segments[m];
      if (static_cast<int>(seg.pulses.size()) != n) continue;
      if (seg.pulses[static_cast<std::size_t>(q)]) {
        close(starts[m] + seg.duration);
      } else {
        if (run == 0.0) run_start = starts[m];
        run += seg.duration;
      }
    }
    close(makespan);
  }

  report.checks = {durations, signs, alignment, adjacency, idles};
  return report;
}

ComplexMatrix ideal_unitary(const CircuitIR& ir) {
  ir.check();
  const Eigen::Index dim = Eigen::Index{1} << ir.n_qubits;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& op : ir.ops) {
    ComplexMatrix g;
    if (op.params) {
      g = ansatz::evaluate(dynamic_template(static_cast<int>(op.qubits.size())), *op.params);
    } else {
      auto ref = gates::reference_unitary(op.gate);
      if (!ref) throw std::invalid_argument("no reference unitary for gate '" + op.gate + "'");
      g = *ref;
    }
    if (g.rows() != (Eigen::Index{1} << op.qubits.size()))
      throw ValidationError("gate '" + op.gate + "' applied to the wrong number of qubits");
    if (op.qubits.size() == 2 && op.qubits[0] > op.qubits[1]) g = swap_conjugate(g);
    const int first = *std::min_element(op.qubits.begin(), op.qubits.end());
    u = embed_block(g, first, ir.n_qubits) * u;
  }
  return u;
}

json to_json(const Schedule& s) {
  json segs = json::array();
  for (const auto& seg : s.segments) {
    json pulses = json::array();
    for (const auto& p : seg.pulses) pulses.push_back(p ? json{{"J", *p}} : json(nullptr));
    segs.push_back({{"duration", seg.duration}, {"pulses", std::move(pulses)}});
  }
  json placements = json::array();
  for (const auto& p : s.placements)
    placements.push_back({{"op", p.op},
                          {"gate", p.gate},
                          {"qubits", p.qubits},
                          {"slot", p.slot},
                          {"start", p.start},
                          {"end", p.end}});
  return {{"format", "dqd-schedule"},
          {"version", 1},
          {"n_qubits", s.n_qubits},
          {"makespan", s.makespan()},
          {"slot_duration", s.slot_duration},
          {"segments", std::move(segs)},
          {"placements", std::move(placements)}};
}

Schedule schedule_from_json(const json& j) {
  try {
    Schedule s;
    s.n_qubits = j.at("n_qubits").get<int>();
    s.slot_duration = j.value("slot_duration", library::kGateDuration);
    for (const auto& seg : j.at("segments")) {
      model::PulseSegment ps;
      ps.duration = seg.at("duration").get<double>();
      for (const auto& p : seg.at("pulses")) {
        if (p.is_null())
          ps.pulses.emplace_back();
        else
          ps.pulses.emplace_back(p.at("J").get<double>());
      }
      s.segments.push_back(std::move(ps));
    }
    for (const auto& p : j.value("placements", json::array())) {
      s.placements.push_back({p.at("op").get<std::size_t>(), p.at("gate").get<std::string>(),
                              p.at("qubits").get<std::vector<int>>(), p.at("slot").get<int>(),
                              p.at("start").get<double>(), p.at("end").get<double>()});
    }
    return s;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("schedule schema error: ") + e.what());
  }
}

json to_json(const CircuitIR& ir) {
  json ops = json::array();
  for (const auto& op : ir.ops) {
    json o{{"gate", op.gate}, {"qubits", op.qubits}};
    if (op.params) o["params"] = *op.params;
    ops.push_back(std::move(o));
  }
  return {{"n_qubits", ir.n_qubits}, {"ops", std::move(ops)}};
}

CircuitIR circuit_from_json(const json& j) {
  try {
    CircuitIR ir;
    const json& ops = j.is_array() ? j : j.at("ops");
    int highest = -1;
    for (const auto& o : ops) {
      LogicalOp op;
      op.gate = o.at("gate").get<std::string>();
      op.qubits = o.at("qubits").get<std::vector<int>>();
      if (o.contains("params")) op.params = o.at("params").get<ansatz::ParamVector>();
      for (int q : op.qubits) highest = std::max(highest, q);
      ir.ops.push_back(std::move(op));
    }
    ir.n_qubits = j.is_object() && j.contains("n_qubits") ? j.at("n_qubits").get<int>()
                                                         : std::max(highest + 1, 1);
    ir.check();
    return ir;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("circuit schema error: ") + e.what());
  }
}

json to_json(const VerifyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"violations", c.violations}});
  return {{"ok", r.ok()}, {"checks", std::move(checks)}, {"warnings", r.warnings}};
}

}  // namespace dqd::scheduler
