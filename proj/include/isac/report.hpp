// SPDX-License-Identifier: Apache-2.0
//
// CSV/JSON writers. Every CSV starts with `#` comment lines recording the
// artifact version and the fully resolved configuration, so a file is enough
// to rerun the experiment that produced it.

#ifndef ISAC_REPORT_HPP
#define ISAC_REPORT_HPP

#include "isac/config.hpp"
#include "isac/experiment.hpp"
#include "isac/numerology.hpp"
#include "isac/radar.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#ifndef ISAC_VERSION
#define ISAC_VERSION "dev"
#endif

namespace isac::report {

inline std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void write_config_header(std::ostream& os, const config::ExperimentConfig& ec)
{
    const auto& s = ec.sweep;
    const auto& c = s.cfg;
    os << "# isac-sim " << ISAC_VERSION << "\n";
    os << "# system.f_c_hz = " << num(c.carrier_hz) << "\n";
    os << "# system.mu = " << c.mu << "\n";
    os << "# system.delta_f_hz = " << num(c.subcarrier_spacing()) << "\n";
    os << "# system.n_subcarriers = " << c.n_subcarriers << "\n";
    os << "# system.m_symbols = " << c.n_symbols << "\n";
    os << "# system.n_cp = " << c.n_cp << "\n";
    os << "# system.k_fft = " << c.k_fft << "\n";
    os << "# system.l_fft = " << c.l_fft << "\n";
    os << "# system.f_s_hz = " << num(c.sample_rate()) << "\n";
    os << "# system.window = " << to_string(c.window) << "\n";
    os << "# system.interpolation = " << to_string(c.interpolation) << "\n";
    os << "# target.range_m = " << num(s.scenario.range_m) << "\n";
    os << "# target.velocity_mps = " << num(s.scenario.velocity_mps) << "\n";
    os << "# target.amplitude = " << num(s.scenario.amplitude) << "\n";
    os << "# target.rcs_dbsm = " << num(s.scenario.rcs_dbsm) << "\n";
    os << "# sweep.snr_db = [";
    for (std::size_t i = 0; i < s.snr_list_db.size(); ++i)
        os << (i ? ", " : "") << num(s.snr_list_db[i]);
    os << "]\n";
    os << "# sweep.trials = " << s.trials << "\n";
    os << "# sweep.master_seed = " << s.master_seed << "\n";
    os << "# phase_noise.mode = " << to_string(s.pn_mode) << "\n";
    os << "# phase_noise.source = " << ec.pn_source << "\n";
    for (const auto& v : s.pn_variants) {
        if (!v.model)
            continue;
        os << "# phase_noise.model " << v.model->name << ": ref_level_dbc = " << num(v.model->ref_level_dbc)
           << ", white_floor_dbc = " << num(v.model->white_floor_dbc) << ", poles = [";
        for (std::size_t i = 0; i < v.model->poles.size(); ++i)
            os << (i ? ", " : "") << "[" << num(v.model->poles[i].corner_hz) << ", " << v.model->poles[i].order << "]";
        os << "]\n";
    }
}

inline constexpr const char* sweep_csv_header =
    "snr_db,pn,fc_hz,rmse_range_m,rmse_velocity_mps,mean_pslr_db,mean_islr_db,crb_range_m,crb_velocity_mps,trials";

inline void write_sweep_csv(std::ostream& os, const config::ExperimentConfig& ec, const SweepResult& result)
{
    write_config_header(os, ec);
    os << sweep_csv_header << "\n";
    for (const auto& r : result.rows) {
        os << num(r.snr_db) << ',' << r.pn << ',' << num(r.fc_hz) << ',' << num(r.rmse_range_m) << ','
           << num(r.rmse_velocity_mps) << ',' << num(r.mean_pslr_db) << ',' << num(r.mean_islr_db) << ','
           << num(r.crb_range_m) << ',' << num(r.crb_velocity_mps) << ',' << r.trials << "\n";
    }
}

// JSON cannot hold infinities; they are written as the strings "inf"/"-inf".
inline nlohmann::json json_number(double v)
{
    if (std::isfinite(v))
        return v;
    return num(v);
}

inline nlohmann::json sweep_json(const config::ExperimentConfig& ec, const SweepResult& result)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"snr_db", json_number(r.snr_db)},
                        {"pn", r.pn},
                        {"fc_hz", json_number(r.fc_hz)},
                        {"rmse_range_m", json_number(r.rmse_range_m)},
                        {"rmse_velocity_mps", json_number(r.rmse_velocity_mps)},
                        {"mean_pslr_db", json_number(r.mean_pslr_db)},
                        {"mean_islr_db", json_number(r.mean_islr_db)},
                        {"crb_range_m", json_number(r.crb_range_m)},
                        {"crb_velocity_mps", json_number(r.crb_velocity_mps)},
                        {"trials", r.trials}});
    }
    return {{"version", ISAC_VERSION},
            {"master_seed", ec.sweep.master_seed},
            {"phase_noise_source", ec.pn_source},
            {"rows", rows}};
}

inline constexpr const char* numerology_csv_header =
    "mu,delta_f_hz,n_subcarriers,t_symbol_s,range_res_m,velocity_res_mps";

inline void write_numerology_csv(std::ostream& os, const std::vector<numerology::ResolutionRow>& rows)
{
    os << numerology_csv_header << "\n";
    for (const auto& r : rows)
        os << r.mu << ',' << num(r.delta_f_hz) << ',' << r.n_subcarriers << ',' << num(r.t_symbol_s) << ','
           << num(r.range_resolution_m) << ',' << num(r.velocity_resolution_mps) << "\n";
}

/// Rows k,l,power_db; l is the centred Doppler column. A non-zero `radius`
/// restricts the dump to a (2 radius + 1)^2 window around the peak.
inline void write_map_csv(std::ostream& os, const RangeDopplerMap& map, const SensingEstimate& peak,
                          std::size_t radius = 0)
{
    os << "# k_bins = " << map.k_bins << "\n";
    os << "# l_bins = " << map.l_bins << "\n";
    os << "# doppler_center_column = " << map.doppler_center << "\n";
    os << "# range_bin_m = " << num(map.range_bin_m) << "\n";
    os << "# velocity_bin_mps = " << num(map.velocity_bin_mps) << "\n";
    os << "# range_m(k) = k * range_bin_m; velocity_mps(l) = (l - doppler_center_column) * velocity_bin_mps\n";
    os << "# peak_k = " << peak.peak_k << ", peak_l = " << peak.peak_l << ", range_m = " << num(peak.range_m)
       << ", velocity_mps = " << num(peak.velocity_mps) << "\n";
    os << "k,l,power_db\n";

    auto emit = [&](std::size_t k, std::size_t l) {
        os << k << ',' << l << ',' << num(linear_to_db(map(k, l))) << "\n";
    };
    if (radius == 0) {
        for (std::size_t k = 0; k < map.k_bins; ++k)
            for (std::size_t l = 0; l < map.l_bins; ++l)
                emit(k, l);
        return;
    }
    const auto span = [](std::size_t centre, std::size_t r, std::size_t n) {
        const std::size_t lo = centre >= r ? centre - r : 0;
        const std::size_t hi = std::min(n - 1, centre + r);
        return std::make_pair(lo, hi);
    };
    const auto [k0, k1] = span(peak.peak_k, radius, map.k_bins);
    const auto [l0, l1] = span(peak.peak_l, radius, map.l_bins);
    for (std::size_t k = k0; k <= k1; ++k)
        for (std::size_t l = l0; l <= l1; ++l)
            emit(k, l);
}

} // namespace isac::report

#endif // ISAC_REPORT_HPP
