#include "eprb/export.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <string>

#include "eprb/quantum_ref.hpp"

namespace eprb {

namespace {

std::string num(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

const char* sign(Outcome o) { return o == Outcome::plus ? "+1" : "-1"; }

constexpr std::array<Outcome, 2> kOutcomes{Outcome::plus, Outcome::minus};

}  // namespace

void write_coincidences_csv(std::ostream& out, const CoincidenceTable& table) {
  out << "m,m_prime,alpha_deg,beta_deg,x,y,count\n";
  for (std::uint32_t m = 1; m <= table.m1(); ++m) {
    for (std::uint32_t mp = 1; mp <= table.m2(); ++mp) {
      for (auto x : kOutcomes) {
        for (auto y : kOutcomes) {
          out << m << ',' << mp << ','
              << num(radians_to_degrees(table.settings_1()[m - 1])) << ','
              << num(radians_to_degrees(table.settings_2()[mp - 1])) << ','
              << sign(x) << ',' << sign(y) << ',' << table.at(x, y, m, mp)
              << '\n';
        }
      }
    }
  }
}

void write_correlations_csv(std::ostream& out, const CorrelationMatrix& corr) {
  out << "m,m_prime,alpha_deg,beta_deg,total,E,E1,E2\n";
  for (std::uint32_t m = 1; m <= corr.m1(); ++m) {
    for (std::uint32_t mp = 1; mp <= corr.m2(); ++mp) {
      const auto& c = corr.cell(m, mp);
      out << m << ',' << mp << ','
          << num(radians_to_degrees(corr.settings_1()[m - 1])) << ','
          << num(radians_to_degrees(corr.settings_2()[mp - 1])) << ','
          << c.total << ',';
      if (c.averages) {
        out << num(c.averages->e) << ',' << num(c.averages->e1) << ','
            << num(c.averages->e2);
      } else {
        out << ",,";
      }
      out << '\n';
    }
  }
}

nlohmann::json to_json(const CoincidenceTable& table,
                       const CorrelationMatrix& corr) {
  nlohmann::json j;
  auto degrees = [](const std::vector<double>& rad) {
    std::vector<double> deg;
    for (double a : rad) deg.push_back(radians_to_degrees(a));
    return deg;
  };
  j["settings_1_deg"] = degrees(table.settings_1());
  j["settings_2_deg"] = degrees(table.settings_2());
  j["total"] = table.total();
  auto pairs = nlohmann::json::array();
  for (std::uint32_t m = 1; m <= table.m1(); ++m) {
    for (std::uint32_t mp = 1; mp <= table.m2(); ++mp) {
      const auto& c = corr.cell(m, mp);
      nlohmann::json p;
      p["m"] = m;
      p["m_prime"] = mp;
      p["counts"] = {
          {"++", table.at(Outcome::plus, Outcome::plus, m, mp)},
          {"+-", table.at(Outcome::plus, Outcome::minus, m, mp)},
          {"-+", table.at(Outcome::minus, Outcome::plus, m, mp)},
          {"--", table.at(Outcome::minus, Outcome::minus, m, mp)},
      };
      p["total"] = c.total;
      if (c.averages) {
        p["E"] = c.averages->e;
        p["E1"] = c.averages->e1;
        p["E2"] = c.averages->e2;
      } else {
        p["E"] = p["E1"] = p["E2"] = nullptr;
      }
      pairs.push_back(std::move(p));
    }
  }
  j["pairs"] = std::move(pairs);
  return j;
}

nlohmann::json to_json(const ChshResult& r) {
  auto quad = [](const SettingQuad& q) {
    return nlohmann::json{{"a", q.a}, {"b", q.b}, {"c", q.c}, {"d", q.d}};
  };
  return {{"S_max", r.s_value},
          {"S_max_settings", quad(r.arg_settings)},
          {"max_abs_S", r.max_abs_s},
          {"max_abs_S_settings", quad(r.arg_abs_settings)}};
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_center,count,normalized\n";
  const auto norm = hist.normalized();
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out << num(hist.center(i)) << ',' << hist.counts[i] << ',' << num(norm[i])
        << '\n';
  }
}

void write_scan_csv(std::ostream& out, const std::vector<ScanPoint>& scan) {
  out << "W,S_max,max_abs_S,total_coincidences\n";
  for (const auto& p : scan) {
    out << num(p.window) << ',' << num(p.s_max) << ',' << num(p.max_abs_s)
        << ',' << p.total_coincidences << '\n';
  }
}

std::vector<ComparisonRow> compare_to_references(const CorrelationMatrix& corr) {
  std::vector<ComparisonRow> rows;
  for (std::uint32_t m = 1; m <= corr.m1(); ++m) {
    for (std::uint32_t mp = 1; mp <= corr.m2(); ++mp) {
      const auto& c = corr.cell(m, mp);
      if (!c.defined()) continue;
      const double a = corr.settings_1()[m - 1];
      const double b = corr.settings_2()[mp - 1];
      rows.push_back({a, b, c.averages->e, singlet_correlation(a, b),
                      sawtooth_correlation(a, b)});
    }
  }
  return rows;
}

void write_comparison_csv(std::ostream& out,
                          const std::vector<ComparisonRow>& rows) {
  out << "alpha_deg,beta_deg,E_measured,E_singlet,E_sawtooth,"
         "residual_singlet,residual_sawtooth\n";
  for (const auto& r : rows) {
    out << num(radians_to_degrees(r.alpha)) << ','
        << num(radians_to_degrees(r.beta)) << ',' << num(r.e_measured) << ','
        << num(r.e_singlet) << ',' << num(r.e_sawtooth) << ','
        << num(r.e_measured - r.e_singlet) << ','
        << num(r.e_measured - r.e_sawtooth) << '\n';
  }
}

}  // namespace eprb
