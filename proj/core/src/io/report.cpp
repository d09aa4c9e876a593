#include "floquet/io/report.hpp"

#include <nlohmann/json.hpp>

#include "format.hpp"

namespace floquet {

using nlohmann::ordered_json;

std::string cycle_notation(const BraidInvariant& braid) {
  std::string out;
  for (const auto& c : braid.cycles) {
    out += '(';
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + std::to_string(c[i] + 1);
    out += ')';
  }
  return out;
}

std::string report_json(const InvariantReport& r) {
  ordered_json j;
  ordered_json ia;
  ordered_json cycles = ordered_json::array();
  for (const auto& c : r.type_Ia.cycles) {
    ordered_json cc = ordered_json::array();
    for (int b : c) cc.push_back(b + 1);
    cycles.push_back(cc);
  }
  ia["cycles"] = cycles;
  ia["nontrivial_cycle_lengths"] = r.type_Ia.nontrivial_lengths();
  ia["band_cycle_length"] = r.type_Ia.band_cycle_length;
  ia["order"] = r.type_Ia.order;
  ia["order_definition"] = "lcm of cycle lengths";
  j["type_Ia"] = ia;
  j["type_Ib"] = r.type_Ib;
  ordered_json iia = ordered_json::array();
  for (const auto& w : r.type_IIa) {
    ordered_json bands = ordered_json::array();
    for (int b : w.bands) bands.push_back(b + 1);
    iia.push_back({{"bands", bands}, {"winding", w.winding}});
  }
  j["type_IIa"] = iia;
  j["det_winding"] = r.det_winding;
  j["type_IIb"] = {{"winding", r.type_IIb.winding},
                   {"liouville", r.type_IIb.liouville},
                   {"residue", r.type_IIb.residue},
                   {"alpha", r.type_IIb_alpha}};
  j["su_part"] = r.su_part;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

std::string report_text(const InvariantReport& r) {
  std::string out;
  out += "Type I.a   cycles " + cycle_notation(r.type_Ia) + "  order " + std::to_string(r.type_Ia.order) +
         " (lcm of cycle lengths)\n";
  out += "Type I.b   " + r.type_Ib + "\n";
  out += "Type II.a  ";
  for (std::size_t i = 0; i < r.type_IIa.size(); ++i) {
    std::string bands;
    for (std::size_t k = 0; k < r.type_IIa[i].bands.size(); ++k)
      bands += (k ? " " : "") + std::to_string(r.type_IIa[i].bands[k] + 1);
    out += (i ? " " : "") + std::string("(") + bands + "):" + std::to_string(r.type_IIa[i].winding);
  }
  out += "  det winding " + std::to_string(r.det_winding) + "\n";
  out += "Type II.b  " + std::to_string(r.type_IIb.winding) + " (Liouville " + std::to_string(r.type_IIb.liouville) +
         ", residue " + detail::fmt17(r.type_IIb.residue) + ")\n";
  out += "SU part    " + r.su_part + "\n";
  for (const auto& [k, v] : r.metadata) out += "meta " + k + " = " + v + "\n";
  return out;
}

}  // namespace floquet
