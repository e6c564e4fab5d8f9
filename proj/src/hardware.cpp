#include "offsim/hardware.hpp"

#include "offsim/workload.hpp"

#include <sstream>

namespace offsim {

ValidationReport validate(const HardwareConfig& hw, const ModelConfig* paired_model) {
    ValidationReport r;
    auto positive = [&](double v, const char* field) {
        if (!(v > 0.0)) r.errors.push_back(std::string(field) + " must be > 0");
    };
    positive(hw.bw_gpu, "bw_gpu");
    positive(hw.bw_s2c, "bw_s2c");
    positive(hw.bw_c2s, "bw_c2s");
    positive(static_cast<double>(hw.gpu_mem), "gpu_mem");
    positive(static_cast<double>(hw.cpu_mem), "cpu_mem");
    positive(static_cast<double>(hw.ssd_capacity), "ssd_capacity");
    positive(hw.gpu_tput, "gpu_tput");
    positive(hw.cpu_opt_tput, "cpu_opt_tput");
    if (hw.n_ssd < 1) r.errors.push_back("n_ssd must be >= 1");
    if (hw.gpu_price_dollars < 0.0) r.errors.push_back("gpu_price_dollars must be >= 0");
    if (hw.ssd_price_dollars < 0.0) r.errors.push_back("ssd_price_dollars must be >= 0");
    if (hw.server_price_dollars < 0.0) r.errors.push_back("server_price_dollars must be >= 0");

    if (paired_model != nullptr && r.ok()) {
        const FootprintReport fp = footprint(*paired_model);
        if (hw.ssd_capacity < fp.model_state_bytes) {
            std::ostringstream os;
            os << "ssd_capacity " << hw.ssd_capacity << " is below the model-state bytes "
               << fp.model_state_bytes << " of model '" << paired_model->name << "'";
            r.warnings.push_back(os.str());
        }
    }
    return r;
}

double aggregate_ssd_bw(const HardwareConfig& hw, SsdDirection dir) {
    const double per_device = dir == SsdDirection::s2c ? hw.bw_s2c : hw.bw_c2s;
    return per_device * static_cast<double>(hw.n_ssd);
}

} // namespace offsim
