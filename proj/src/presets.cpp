#include "offsim/presets.hpp"

#include "offsim/errors.hpp"

#include <algorithm>

namespace offsim {

namespace {

ModelConfig make_model(const char* name, std::uint32_t layers, std::uint32_t heads,
                       std::uint64_t hidden) {
    ModelConfig m;
    m.name = name;
    m.num_layers = layers;
    m.num_heads = heads;
    m.hidden_dim = hidden;
    m.batch_size = 1;
    m.seq_len = 1024;
    return m;
}

const std::vector<ModelConfig>& model_table() {
    static const std::vector<ModelConfig> table = {
        make_model("gpt3-13b", 40, 40, 5120),    make_model("gpt3-33b", 60, 52, 6656),
        make_model("gpt3-65b", 80, 64, 8192),    make_model("gpt3-135b", 88, 88, 11264),
        make_model("gpt3-175b", 96, 96, 12288),  make_model("gpt3-276b", 112, 112, 14336),
        make_model("gpt3-412b", 128, 128, 16384), make_model("gpt3-805b", 160, 160, 20480),
    };
    return table;
}

HardwareConfig make_hw(const char* name, std::uint64_t gpu_mem, double gpu_tput,
                       double gpu_price) {
    HardwareConfig hw;
    hw.name = name;
    hw.bw_gpu = 25e9;  // effective PCIe Gen4 x16 per direction
    hw.bw_s2c = 6e9;   // per-SSD sequential read
    hw.bw_c2s = 3e9;   // per-SSD sequential write
    hw.n_ssd = 12;
    hw.gpu_mem = gpu_mem;
    hw.cpu_mem = 768ull * 1000 * 1000 * 1000;
    hw.ssd_capacity = 12ull * 3840 * 1000 * 1000 * 1000; // 12x 3.84 TB
    hw.gpu_tput = gpu_tput;
    hw.cpu_opt_tput = 1e9; // sustained CPU optimizer rate, params/s
    hw.gpu_price_dollars = gpu_price;
    hw.ssd_price_dollars = 308.0;
    hw.server_price_dollars = 14098.0;
    return hw;
}

const std::vector<HardwareConfig>& hardware_table() {
    static const std::vector<HardwareConfig> table = {
        make_hw("a100-12ssd", 80ull * 1000 * 1000 * 1000, 2.0e14, 14177.0),
        make_hw("rtx4090-12ssd", 24ull * 1000 * 1000 * 1000, 1.64e14, 1600.0),
    };
    return table;
}

} // namespace

const std::vector<std::string>& model_preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& m : model_table()) out.push_back(m.name);
        return out;
    }();
    return names;
}

ModelConfig model_preset(const std::string& name) {
    for (const auto& m : model_table())
        if (m.name == name) return m;
    throw ConfigError("unknown model preset '" + name + "'");
}

const std::vector<std::string>& hardware_preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& h : hardware_table()) out.push_back(h.name);
        return out;
    }();
    return names;
}

HardwareConfig hardware_preset(const std::string& name) {
    for (const auto& h : hardware_table())
        if (h.name == name) return h;
    throw ConfigError("unknown hardware preset '" + name + "'");
}

std::vector<ModelConfig> model_ladder() {
    std::vector<ModelConfig> ladder = model_table();
    std::sort(ladder.begin(), ladder.end(), [](const ModelConfig& a, const ModelConfig& b) {
        return total_param_count(a) < total_param_count(b);
    });
    return ladder;
}

} // namespace offsim
