#include "cqlad/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqlad/circuit.hpp"
#include "cqlad/constants.hpp"
#include "cqlad/dynamics.hpp"
#include "cqlad/floquet.hpp"
#include "cqlad/lattice.hpp"
#include "cqlad/netlist.hpp"

namespace cqlad::cli {
namespace {

using nlohmann::ordered_json;

constexpr double kHalfPi = constants::pi / 2.0;

/// Flag-level problems detected after CLI11 parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class... Args>
std::string strf(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string num(double x) { return strf("%.12g", x); }

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) line += ',';
    line += cells[k];
  }
  line += '\n';
  return line;
}

struct Sink {
  std::string format = "csv";
  std::string path;
};

void add_sink(CLI::App* cmd, Sink& sink) {
  cmd->add_option("--format", sink.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", sink.path, "write the data to this file instead of stdout");
}

void deliver(const Sink& sink, const std::string& data, std::ostream& out) {
  if (sink.path.empty()) {
    out << data;
    return;
  }
  std::ofstream file(sink.path, std::ios::binary);
  if (!file) throw UsageError(strf("cannot open output file '%s'", sink.path.c_str()));
  file << data;
  if (!file) throw std::runtime_error(strf("write to '%s' failed", sink.path.c_str()));
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---- .qnl input ----

netlist::Validated load_document(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError(strf("cannot open input file '%s'", path.c_str()));
  std::ostringstream text;
  text << file.rdbuf();
  auto parsed = netlist::parse(text.str());
  if (const auto* e = std::get_if<netlist::ParseError>(&parsed))
    throw std::runtime_error(strf("%s:%zu:%zu: %s", path.c_str(), e->line,
                                  e->column, e->message.c_str()));
  auto checked = netlist::validate(std::get<netlist::Document>(parsed));
  if (const auto* errs =
          std::get_if<std::vector<netlist::ValidationError>>(&checked)) {
    std::string msg = "invalid input document:";
    for (const netlist::ValidationError& e : *errs)
      msg += strf("\n  %s:%zu: %s", path.c_str(), e.line, e.message.c_str());
    throw std::runtime_error(msg);
  }
  return checked;
}

const netlist::LadderInput& as_ladder(const netlist::Validated& v) {
  if (const auto* ladder = std::get_if<netlist::LadderInput>(&v)) return *ladder;
  throw std::runtime_error(
      "this subcommand needs a ladder document, but the input describes a circuit");
}

const netlist::CircuitInput& as_circuit(const netlist::Validated& v) {
  if (const auto* circuit = std::get_if<netlist::CircuitInput>(&v)) return *circuit;
  throw std::runtime_error(
      "this subcommand needs a circuit document, but the input describes a ladder");
}

std::vector<double> time_grid(double t_final, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time spacing must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("final time must be >= 0");
  const double steps = std::floor(t_final / dt + 1e-9);
  if (steps > 2e6) throw UsageError("time grid exceeds 2e6 rows; coarsen --dt");
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (std::size_t k = 0; k < times.size(); ++k)
    times[k] = dt * static_cast<double>(k);
  return times;
}

std::string site_name(const lattice::LatticeModel& model, std::size_t s) {
  const std::string& label = model.label(s);
  return label.empty() ? std::to_string(s) : label;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "cqlad: circuit parameters, modulation sidebands, and Creutz-ladder "
      "analysis.\nAngles are radians, frequencies rad/s, energies joules; "
      "CSV goes to stdout unless --out is given."};
  app.require_subcommand(1);

  // ---------------- params ----------------
  struct {
    double ej = 0.0;
    std::optional<double> ec, cap, lc, cc;
    Sink sink;
  } pa;
  auto* params = app.add_subcommand(
      "params", "transmon oscillator parameters, optionally with a coupler");
  params->add_option("--ej", pa.ej, "junction energy E_J (J)")->required();
  auto* charge = params->add_option_group("charge scale", "exactly one required");
  charge->add_option("--ec", pa.ec, "charging energy E_C (J)");
  charge->add_option("--cap", pa.cap, "shunt capacitance C (F)");
  charge->require_option(1);
  auto* coupler = params->add_option_group("coupler", "optional, at most one");
  coupler->add_option("--coupling-l", pa.lc, "coupling inductance (H)");
  coupler->add_option("--coupling-c", pa.cc, "coupling capacitance (F)");
  coupler->require_option(0, 1);
  add_sink(params, pa.sink);
  params->callback([&] {
    circuit::Warnings warnings;
    const auto spec = circuit::TransmonSpec::make(pa.cap, pa.ec, pa.ej);
    const auto p = circuit::transmon_params(spec, &warnings);
    std::optional<double> hopping;
    if (pa.lc || pa.cc) {
      circuit::CoupledCircuitSpec coupled;
      coupled.left = spec;
      coupled.right = spec;
      if (pa.lc) coupled.coupling_inductance = *pa.lc;
      if (pa.cc) coupled.coupling_capacitance = *pa.cc;
      hopping = circuit::coupled_params(coupled, &warnings).hopping;
    }
    for (const std::string& w : warnings) err << "warning: " << w << "\n";
    std::string data;
    if (pa.sink.format == "json") {
      ordered_json j;
      j["omega0"] = p.omega0;
      j["delta_omega0"] = p.delta_omega0;
      j["kerr"] = p.kerr;
      j["kerr6"] = p.kerr6;
      j["epsilon"] = p.epsilon;
      if (hopping) j["hopping_J"] = *hopping;
      data = dump(j);
    } else {
      std::vector<std::string> head{"omega0", "delta_omega0", "kerr", "kerr6",
                                    "epsilon"};
      std::vector<std::string> row{num(p.omega0), num(p.delta_omega0),
                                   num(p.kerr), num(p.kerr6), num(p.epsilon)};
      if (hopping) {
        head.push_back("hopping_J");
        row.push_back(num(*hopping));
      }
      data = join(head) + join(row);
    }
    deliver(pa.sink, data, out);
  });

  // ---------------- floquet ----------------
  struct {
    std::string input;
    double omega_m = 0.0, depth = 0.0, phase1 = 0.0, phase2 = 0.0, j = 1.0;
    int nmax = 3, order = 0;
    Sink sink;
  } fl;
  auto* floq = app.add_subcommand(
      "floquet", "sideband couplings of a modulated bond or document");
  auto* fl_in = floq->add_option("--input", fl.input, ".qnl circuit document");
  auto* fl_om = floq->add_option("--omega-m", fl.omega_m,
                                 "modulation frequency (rad/s)");
  auto* fl_de = floq->add_option("--depth", fl.depth,
                                 "modulation depth on both sites (rad/s)");
  auto* fl_p1 = floq->add_option("--phase1", fl.phase1, "site-1 drive phase");
  auto* fl_p2 = floq->add_option("--phase2", fl.phase2, "site-2 drive phase");
  auto* fl_j = floq->add_option("--j", fl.j, "bare coupling J")
                   ->capture_default_str();
  floq->add_option("--nmax", fl.nmax, "tabulate harmonics -nmax..nmax")
      ->check(CLI::Range(0, 64))
      ->capture_default_str();
  auto* fl_or = floq->add_option(
      "--order", fl.order,
      "single harmonic (inline) or forced harmonic for every bond (--input)");
  for (CLI::Option* o : {fl_om, fl_de, fl_p1, fl_p2, fl_j}) fl_in->excludes(o);
  add_sink(floq, fl.sink);
  floq->callback([&] {
    std::string data;
    const bool json = fl.sink.format == "json";
    if (!fl.input.empty()) {
      const auto doc = load_document(fl.input);
      const netlist::CircuitInput& ci = as_circuit(doc);
      if (!ci.modulated)
        throw std::runtime_error("input document has no modulation records");
      std::optional<int> force;
      if (fl_or->count()) force = fl.order;
      const auto em = floquet::effective_hamiltonian(ci.model, ci.drive, force);
      ordered_json bonds = ordered_json::array();
      std::string csv = join({"from", "to", "order", "detuning", "index",
                              "angle", "re", "im", "abs"});
      for (const floquet::BondAssignment& b : em.bonds) {
        const std::complex<double> t = em.model.bond(b.i, b.j).value();
        if (json) {
          ordered_json row;
          row["from"] = ci.model.label(b.i);
          row["to"] = ci.model.label(b.j);
          row["order"] = b.order;
          row["detuning"] = b.detuning;
          row["index"] = b.index;
          row["angle"] = b.angle;
          row["re"] = t.real();
          row["im"] = t.imag();
          row["abs"] = std::abs(t);
          bonds.push_back(row);
        } else {
          csv += join({ci.model.label(b.i), ci.model.label(b.j),
                       std::to_string(b.order), num(b.detuning), num(b.index),
                       num(b.angle), num(t.real()), num(t.imag()),
                       num(std::abs(t))});
        }
      }
      data = json ? dump(ordered_json{{"bonds", bonds}}) : csv;
    } else {
      if (!fl_om->count() || !fl_de->count())
        throw UsageError("floquet needs --omega-m and --depth (or --input)");
      floquet::DriveSpec drive;
      drive.omega_m = fl.omega_m;
      drive.sites = {{0.0, fl.depth, fl.phase1}, {0.0, fl.depth, fl.phase2}};
      std::vector<int> orders;
      if (fl_or->count()) {
        orders.push_back(fl.order);
      } else {
        for (int n = -fl.nmax; n <= fl.nmax; ++n) orders.push_back(n);
      }
      ordered_json rows = ordered_json::array();
      std::string csv = join({"n", "re", "im", "abs", "index", "angle"});
      for (int n : orders) {
        const auto sc = floquet::sideband_coupling(fl.j, drive, n);
        if (json) {
          ordered_json row;
          row["n"] = n;
          row["re"] = sc.amplitude.real();
          row["im"] = sc.amplitude.imag();
          row["abs"] = std::abs(sc.amplitude);
          row["index"] = sc.index;
          row["angle"] = sc.angle;
          rows.push_back(row);
        } else {
          csv += join({std::to_string(n), num(sc.amplitude.real()),
                       num(sc.amplitude.imag()), num(std::abs(sc.amplitude)),
                       num(sc.index), num(sc.angle)});
        }
      }
      data = json ? dump(ordered_json{{"orders", rows}}) : csv;
    }
    deliver(fl.sink, data, out);
  });

  // ---------------- bands ----------------
  struct {
    std::string input;
    std::size_t rungs = 64;
    double td = 1.0, tv = 0.0, phi = kHalfPi;
    Sink sink;
  } ba;
  auto* bands = app.add_subcommand(
      "bands", "closed-form band structure of the periodic ladder");
  auto* ba_in = bands->add_option("--input", ba.input, ".qnl ladder document");
  auto* ba_n = bands->add_option("--N", ba.rungs, "rung count")
                   ->capture_default_str();
  auto* ba_td = bands->add_option("--td", ba.td, "diagonal hopping t_d")
                    ->capture_default_str();
  auto* ba_tv = bands->add_option("--tv", ba.tv, "vertical hopping t_v")
                    ->capture_default_str();
  auto* ba_ph = bands->add_option("--phi", ba.phi, "leg flux phi (radians)")
                    ->capture_default_str();
  for (CLI::Option* o : {ba_n, ba_td, ba_tv, ba_ph}) ba_in->excludes(o);
  add_sink(bands, ba.sink);
  bands->callback([&] {
    if (!ba.input.empty()) {
      const auto doc = load_document(ba.input);
      const netlist::LadderInput& lad = as_ladder(doc);
      ba.rungs = lad.rungs;
      ba.td = lad.t_d;
      ba.tv = lad.t_v;
      ba.phi = lad.phi;
    }
    const auto bs = lattice::band_structure(ba.rungs, ba.td, ba.tv, ba.phi);
    std::string data;
    if (ba.sink.format == "json") {
      ordered_json j;
      j["k"] = bs.k;
      j["E_minus"] = bs.lower;
      j["E_plus"] = bs.upper;
      j["n0"] = bs.n0;
      j["nx"] = bs.nx;
      j["nz"] = bs.nz;
      j["flatness_lower"] = bs.flatness_lower;
      j["flatness_upper"] = bs.flatness_upper;
      data = dump(j);
    } else {
      data = join({"k", "E_minus", "E_plus", "n0", "nx", "nz"});
      for (std::size_t s = 0; s < bs.k.size(); ++s)
        data += join({std::to_string(bs.k[s]), num(bs.lower[s]),
                      num(bs.upper[s]), num(bs.n0[s]), num(bs.nx[s]),
                      num(bs.nz[s])});
    }
    deliver(ba.sink, data, out);
  });

  // ---------------- winding ----------------
  struct {
    std::string input;
    double td = 1.0, tv = 0.0, phi = kHalfPi;
    std::size_t samples = 1024;
    Sink sink;
  } wi;
  auto* winding = app.add_subcommand(
      "winding", "winding number of the Bloch curve around the origin");
  auto* wi_in = winding->add_option("--input", wi.input, ".qnl ladder document");
  auto* wi_td = winding->add_option("--td", wi.td, "diagonal hopping t_d")
                    ->capture_default_str();
  auto* wi_tv = winding->add_option("--tv", wi.tv, "vertical hopping t_v")
                    ->capture_default_str();
  auto* wi_ph = winding->add_option("--phi", wi.phi, "leg flux phi (radians)")
                    ->capture_default_str();
  winding->add_option("--samples", wi.samples, "theta samples on the zone")
      ->capture_default_str();
  for (CLI::Option* o : {wi_td, wi_tv, wi_ph}) wi_in->excludes(o);
  add_sink(winding, wi.sink);
  winding->callback([&] {
    if (!wi.input.empty()) {
      const auto doc = load_document(wi.input);
      const netlist::LadderInput& lad = as_ladder(doc);
      wi.td = lad.t_d;
      wi.tv = lad.t_v;
      wi.phi = lad.phi;
    }
    const auto report = lattice::winding_number(wi.td, wi.tv, wi.phi, wi.samples);
    std::string data;
    if (wi.sink.format == "json") {
      ordered_json j;
      j["winding"] = report.winding;
      j["ratio"] = report.ratio;
      j["critical"] = report.critical;
      data = dump(j);
    } else {
      data = join({"winding", "ratio", "critical"}) +
             join({std::to_string(report.winding), num(report.ratio),
                   report.critical ? "true" : "false"});
    }
    deliver(wi.sink, data, out);
  });

  // ---------------- berry ----------------
  struct {
    std::string input;
    std::size_t rungs = 64;
    double td = 1.0, tv = 0.0, phi = kHalfPi;
    Sink sink;
  } be;
  auto* berry = app.add_subcommand(
      "berry", "Zak/Berry phase of the lower band from the Wilson loop");
  auto* be_in = berry->add_option("--input", be.input, ".qnl ladder document");
  auto* be_n = berry->add_option("--N", be.rungs, "rung count (k-points)")
                   ->capture_default_str();
  auto* be_td = berry->add_option("--td", be.td, "diagonal hopping t_d")
                    ->capture_default_str();
  auto* be_tv = berry->add_option("--tv", be.tv, "vertical hopping t_v")
                    ->capture_default_str();
  auto* be_ph = berry->add_option("--phi", be.phi, "leg flux phi (radians)")
                    ->capture_default_str();
  for (CLI::Option* o : {be_n, be_td, be_tv, be_ph}) be_in->excludes(o);
  add_sink(berry, be.sink);
  berry->callback([&] {
    if (!be.input.empty()) {
      const auto doc = load_document(be.input);
      const netlist::LadderInput& lad = as_ladder(doc);
      be.rungs = lad.rungs;
      be.td = lad.t_d;
      be.tv = lad.t_v;
      be.phi = lad.phi;
    }
    const double phase = lattice::berry_phase(be.rungs, be.td, be.tv, be.phi);
    std::string data;
    if (be.sink.format == "json") {
      ordered_json j;
      j["berry_phase"] = phase;
      data = dump(j);
    } else {
      data = join({"berry_phase"}) + join({num(phase)});
    }
    deliver(be.sink, data, out);
  });

  // ---------------- zeromodes ----------------
  struct {
    std::size_t rungs = 8;
    Sink sink;
  } ze;
  auto* zeromodes = app.add_subcommand(
      "zeromodes", "edge zero modes of the open strong-coupling ladder "
                   "(t_d=1, t_v=0, phi=pi/2)");
  zeromodes->add_option("--N", ze.rungs, "rung count")->capture_default_str();
  add_sink(zeromodes, ze.sink);
  zeromodes->callback([&] {
    const auto modes = lattice::edge_zero_modes(ze.rungs);
    std::string data;
    if (ze.sink.format == "json") {
      ordered_json left = ordered_json::array();
      ordered_json right = ordered_json::array();
      for (Eigen::Index s = 0; s < modes.left.size(); ++s) {
        left.push_back({modes.left[s].real(), modes.left[s].imag()});
        right.push_back({modes.right[s].real(), modes.right[s].imag()});
      }
      ordered_json j;
      j["residual_left"] = modes.residual_left;
      j["residual_right"] = modes.residual_right;
      j["left"] = left;
      j["right"] = right;
      data = dump(j);
    } else {
      data = join({"site", "leg", "rung", "left_re", "left_im", "right_re",
                   "right_im"});
      for (Eigen::Index s = 0; s < modes.left.size(); ++s) {
        const auto u = static_cast<std::size_t>(s);
        data += join({std::to_string(u), u < ze.rungs ? "a" : "b",
                      std::to_string(u % ze.rungs), num(modes.left[s].real()),
                      num(modes.left[s].imag()), num(modes.right[s].real()),
                      num(modes.right[s].imag())});
      }
    }
    deliver(ze.sink, data, out);
  });

  // ---------------- domainwall ----------------
  struct {
    std::size_t rungs = 64;
    double td = 1.0, tv_left = 1.0, tv_right = 3.0, phi = kHalfPi;
    Sink sink;
  } dw;
  auto* domainwall = app.add_subcommand(
      "domainwall", "near-zero mode bound to a vertical-coupling step");
  domainwall->add_option("--N", dw.rungs, "rung count")->capture_default_str();
  domainwall->add_option("--td", dw.td, "diagonal hopping t_d")
      ->capture_default_str();
  domainwall->add_option("--tv-left", dw.tv_left, "t_v on the left half")
      ->capture_default_str();
  domainwall->add_option("--tv-right", dw.tv_right, "t_v on the right half")
      ->capture_default_str();
  domainwall->add_option("--phi", dw.phi, "leg flux phi (radians)")
      ->capture_default_str();
  add_sink(domainwall, dw.sink);
  domainwall->callback([&] {
    std::vector<double> profile(dw.rungs);
    for (std::size_t n = 0; n < dw.rungs; ++n)
      profile[n] = n < dw.rungs / 2 ? dw.tv_left : dw.tv_right;
    const auto mode = lattice::domain_wall_mode(dw.rungs, dw.td, profile, dw.phi);
    std::string data;
    if (dw.sink.format == "json") {
      ordered_json j;
      j["energy"] = mode.energy;
      j["gap"] = mode.gap;
      j["kink"] = mode.kink;
      j["correlation"] = mode.correlation;
      j["occupation"] = mode.occupation;
      j["envelope"] = mode.envelope;
      data = dump(j);
    } else {
      data = join({"rung", "occupation", "envelope"});
      for (std::size_t n = 0; n < mode.occupation.size(); ++n)
        data += join({std::to_string(n), num(mode.occupation[n]),
                      num(mode.envelope[n])});
    }
    deliver(dw.sink, data, out);
  });

  // ---------------- plaquette ----------------
  struct {
    double t_final = 2.0 * constants::pi;
    double dt = 0.01;
    Sink sink;
  } pl;
  auto* plaquette = app.add_subcommand(
      "plaquette", "closed-form chiral motion of |a1> on the 4-site plaquette");
  plaquette->add_option("--t-final", pl.t_final, "sweep end time (1/J units)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  plaquette->add_option("--dt", pl.dt, "sample spacing")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_sink(plaquette, pl.sink);
  plaquette->callback([&] {
    const auto times = time_grid(pl.t_final, pl.dt);
    std::string data;
    if (pl.sink.format == "json") {
      ordered_json j;
      j["t"] = times;
      std::vector<std::vector<double>> p(4, std::vector<double>(times.size()));
      for (std::size_t k = 0; k < times.size(); ++k) {
        const auto sample = dynamics::plaquette_closed_form(times[k]);
        for (int s = 0; s < 4; ++s) p[s][k] = sample.occupation[s];
      }
      j["p1"] = p[0];
      j["p2"] = p[1];
      j["p3"] = p[2];
      j["p4"] = p[3];
      data = dump(j);
    } else {
      data = join({"t", "p1", "p2", "p3", "p4"});
      for (double t : times) {
        const auto sample = dynamics::plaquette_closed_form(t);
        data += join({num(t), num(sample.occupation[0]),
                      num(sample.occupation[1]), num(sample.occupation[2]),
                      num(sample.occupation[3])});
      }
    }
    deliver(pl.sink, data, out);
  });

  // ---------------- evolve ----------------
  struct {
    std::string input;
    double omega_m = 0.0, depth = 0.0, phase1 = 0.0, phase2 = 0.0, j = 1.0;
    double delta = 0.0, t_final = 10.0, dt = 0.0, step = 0.0;
    std::size_t site = 0;
    Sink sink;
  } ev;
  auto* evolve = app.add_subcommand(
      "evolve", "integrate the driven Schrodinger equation from one occupied site");
  auto* ev_in = evolve->add_option("--input", ev.input, ".qnl circuit document");
  auto* ev_om = evolve->add_option("--omega-m", ev.omega_m,
                                   "modulation frequency (rad/s)");
  auto* ev_de = evolve->add_option("--depth", ev.depth,
                                   "modulation depth on both sites");
  auto* ev_p1 = evolve->add_option("--phase1", ev.phase1, "site-1 drive phase");
  auto* ev_p2 = evolve->add_option("--phase2", ev.phase2, "site-2 drive phase");
  auto* ev_j = evolve->add_option("--j", ev.j, "bare coupling J")
                   ->capture_default_str();
  auto* ev_dl = evolve->add_option(
      "--delta", ev.delta, "static frequency offset of site 1 (rad/s)");
  evolve->add_option("--site", ev.site, "initially occupied site index")
      ->capture_default_str();
  evolve->add_option("--t-final", ev.t_final, "end time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  evolve->add_option("--dt", ev.dt, "sample spacing (default t-final/500)")
      ->check(CLI::PositiveNumber);
  evolve->add_option("--step", ev.step,
                     "integrator step (default: quarter of the stability cap)")
      ->check(CLI::PositiveNumber);
  for (CLI::Option* o : {ev_om, ev_de, ev_p1, ev_p2, ev_j, ev_dl})
    ev_in->excludes(o);
  add_sink(evolve, ev.sink);
  evolve->callback([&] {
    lattice::LatticeModel model;
    floquet::DriveSpec drive;
    if (!ev.input.empty()) {
      const auto doc = load_document(ev.input);
      const netlist::CircuitInput& ci = as_circuit(doc);
      model = ci.model;
      drive = ci.drive;
      if (!ci.modulated) drive.omega_m = 1.0;  // unobservable at zero depth
    } else {
      if (!ev_om->count() || !ev_de->count())
        throw UsageError("evolve needs --omega-m and --depth (or --input)");
      model = lattice::LatticeModel(2);
      model.add_hopping(0, 1, ev.j);
      drive.omega_m = ev.omega_m;
      drive.sites = {{0.0, ev.depth, ev.phase1}, {ev.delta, ev.depth, ev.phase2}};
    }
    if (ev.site >= model.size())
      throw std::invalid_argument("--site is out of range for this model");
    const double dt = ev.dt > 0.0 ? ev.dt : ev.t_final / 500.0;
    const auto times = time_grid(ev.t_final, dt);
    dynamics::StateVector psi0 = dynamics::StateVector::Zero(
        static_cast<Eigen::Index>(model.size()));
    psi0[static_cast<Eigen::Index>(ev.site)] = 1.0;
    const auto traj = dynamics::evolve_driven(model, drive, psi0, times, ev.step);
    std::string data;
    if (ev.sink.format == "json") {
      ordered_json j;
      j["times"] = traj.times;
      ordered_json sites = ordered_json::array();
      for (std::size_t s = 0; s < model.size(); ++s)
        sites.push_back(site_name(model, s));
      j["sites"] = sites;
      j["occupations"] = traj.occupations;
      j["renormalizations"] = traj.renormalizations;
      data = dump(j);
    } else {
      std::vector<std::string> head{"t"};
      for (std::size_t s = 0; s < model.size(); ++s)
        head.push_back("p_" + site_name(model, s));
      data = join(head);
      for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<std::string> row{num(traj.times[k])};
        for (double p : traj.occupations[k]) row.push_back(num(p));
        data += join(row);
      }
    }
    deliver(ev.sink, data, out);
  });

  // ---------------- compare ----------------
  struct {
    double omega_m = 0.0, depth = 0.0, phase1 = 0.0, phase2 = 0.0, j = 1.0;
    int order = 0;
    double t_final = 0.0, dt = 0.0;
    std::size_t site = 0;
    Sink sink;
  } co;
  auto* compare = app.add_subcommand(
      "compare",
      "oscillation period of the full driven two-site system vs. its "
      "sideband-averaged static model");
  compare->add_option("--omega-m", co.omega_m, "modulation frequency (rad/s)")
      ->required();
  compare->add_option("--depth", co.depth, "modulation depth on both sites")
      ->required();
  compare->add_option("--phase1", co.phase1, "site-1 drive phase");
  compare->add_option("--phase2", co.phase2, "site-2 drive phase");
  compare->add_option("--j", co.j, "bare coupling J")->capture_default_str();
  compare->add_option("--order", co.order,
                      "harmonic bridged by the static detuning")
      ->check(CLI::Range(-64, 64))
      ->capture_default_str();
  compare->add_option("--t-final", co.t_final,
                      "window (default 1.25 predicted periods)")
      ->check(CLI::PositiveNumber);
  compare->add_option("--dt", co.dt, "sample spacing (default window/500)")
      ->check(CLI::PositiveNumber);
  compare->add_option("--site", co.site, "site whose occupation is tracked")
      ->check(CLI::Range(std::size_t{0}, std::size_t{1}))
      ->capture_default_str();
  add_sink(compare, co.sink);
  compare->callback([&] {
    floquet::DriveSpec drive;
    drive.omega_m = co.omega_m;
    drive.sites = {{0.0, co.depth, co.phase1},
                   {co.order * co.omega_m, co.depth, co.phase2}};
    const auto sc = floquet::sideband_coupling(co.j, drive, co.order);
    const double jn = std::abs(sc.amplitude);
    if (jn < 1e-12 * std::abs(co.j))
      throw std::domain_error(
          "effective coupling vanishes at this drive; no period to compare");
    const double predicted = constants::pi / jn;
    const double t_final = co.t_final > 0.0 ? co.t_final : 1.25 * predicted;
    const double dt = co.dt > 0.0 ? co.dt : t_final / 500.0;

    lattice::LatticeModel model(2);
    model.add_hopping(0, 1, co.j);
    const double cap = dynamics::driven_step_cap(model, drive);
    const double steps = t_final / (0.25 * cap);
    if (steps > 5e7)
      throw std::domain_error(strf(
          "window %.3g needs ~%.3g integrator steps: |J_n| = %.3g is too "
          "weak to compare against the drive; pass a shorter --t-final",
          t_final, steps, jn));
    const auto times = time_grid(t_final, dt);
    dynamics::StateVector psi0 = dynamics::StateVector::Zero(2);
    psi0[static_cast<Eigen::Index>(co.site)] = 1.0;
    const auto driven = dynamics::evolve_driven(model, drive, psi0, times);
    const auto em = floquet::effective_hamiltonian(model, drive);
    const auto effective = dynamics::evolve_static(em.model, psi0, times);

    const double period_driven = dynamics::oscillation_period(driven, co.site);
    const double period_effective =
        dynamics::oscillation_period(effective, co.site);
    if (period_driven <= 0.0 || period_effective <= 0.0)
      throw std::domain_error(
          "no oscillation minimum inside the window; extend --t-final");
    const double ratio = period_driven / period_effective;

    std::string data;
    if (co.sink.format == "json") {
      ordered_json j;
      j["period_driven"] = period_driven;
      j["period_effective"] = period_effective;
      j["ratio"] = ratio;
      j["predicted"] = predicted;
      j["times"] = times;
      std::vector<double> pd(times.size()), pe(times.size());
      for (std::size_t k = 0; k < times.size(); ++k) {
        pd[k] = driven.occupations[k][co.site];
        pe[k] = effective.occupations[k][co.site];
      }
      j["driven"] = pd;
      j["effective"] = pe;
      data = dump(j);
    } else {
      data = join({"period_driven", "period_effective", "ratio"}) +
             join({num(period_driven), num(period_effective), num(ratio)});
    }
    deliver(co.sink, data, out);
  });

  // ---------------- fuzz ----------------
  struct {
    std::size_t count = 100000;
    unsigned seed = 1;
    std::size_t max_len = 160;
    Sink sink;
  } fu;
  auto* fuzz = app.add_subcommand(
      "fuzz", "throw random bytes at the .qnl parser and check the "
              "print/parse fixpoint on everything that parses");
  fuzz->add_option("--count", fu.count, "number of inputs")
      ->capture_default_str();
  fuzz->add_option("--seed", fu.seed, "RNG seed")->capture_default_str();
  fuzz->add_option("--max-len", fu.max_len, "maximum input length (bytes)")
      ->capture_default_str();
  add_sink(fuzz, fu.sink);
  fuzz->callback([&] {
    std::mt19937 rng(fu.seed);
    std::uniform_int_distribution<int> len(0, static_cast<int>(fu.max_len));
    std::uniform_int_distribution<int> byte(0, 255);
    static const char charset[] = "[]sitecoupling=#_ \t\n0123456789.eq+-";
    std::size_t documents = 0, parse_errors = 0, fixpoint_failures = 0;
    std::string s;
    for (std::size_t it = 0; it < fu.count; ++it) {
      s.clear();
      const int n = len(rng);
      const bool structured = it % 2 == 0;
      for (int k = 0; k < n; ++k)
        s += structured ? charset[byte(rng) % (sizeof charset - 1)]
                        : static_cast<char>(byte(rng));
      auto parsed = netlist::parse(s);
      if (auto* doc = std::get_if<netlist::Document>(&parsed)) {
        ++documents;
        try {
          const std::string printed = netlist::print(*doc);
          auto reparsed = netlist::parse(printed);
          auto* doc2 = std::get_if<netlist::Document>(&reparsed);
          if (!doc2 || netlist::print(*doc2) != printed) ++fixpoint_failures;
          (void)netlist::validate(*doc);
        } catch (const std::exception&) {
          ++fixpoint_failures;
        }
      } else {
        ++parse_errors;
      }
    }
    std::string data;
    if (fu.sink.format == "json") {
      ordered_json j;
      j["count"] = fu.count;
      j["documents"] = documents;
      j["parse_errors"] = parse_errors;
      j["fixpoint_failures"] = fixpoint_failures;
      data = dump(j);
    } else {
      data = join({"count", "documents", "parse_errors", "fixpoint_failures"}) +
             join({std::to_string(fu.count), std::to_string(documents),
                   std::to_string(parse_errors),
                   std::to_string(fixpoint_failures)});
    }
    deliver(fu.sink, data, out);
    if (fixpoint_failures)
      throw std::runtime_error(
          strf("fuzz found %zu fixpoint failures", fixpoint_failures));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    while (!target->get_subcommands().empty())
      target = target->get_subcommands().front();
    out << target->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cqlad::cli
