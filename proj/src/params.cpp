#include "wordmap/params.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wordmap/errors.hpp"

namespace wordmap {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(std::string_view key, std::string_view value) {
    std::string s(value);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE)
        throw_data("params: bad numeric value '" + s + "' for key '" + std::string(key) +
                   "'");
    return v;
}

long parse_long(std::string_view key, std::string_view value) {
    std::string s(value);
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE)
        throw_data("params: bad integer value '" + s + "' for key '" + std::string(key) +
                   "'");
    return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
    std::string s(value);
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE)
        throw_data("params: bad integer value '" + s + "' for key '" + std::string(key) +
                   "'");
    return v;
}

// Map-module keys shared by visual/auditory/association blocks.
bool set_map_key(MapParamsSpec& m, std::string_view field, std::string_view key,
                 std::string_view value) {
    if (field == "a_t") m.a_t = parse_double(key, value);
    else if (field == "lp") m.lp = parse_double(key, value);
    else if (field == "beta") m.beta = parse_double(key, value);
    else if (field == "e_b") m.e_b = parse_double(key, value);
    else if (field == "e_n_factor") m.e_n_factor = parse_double(key, value);
    else if (field == "s") m.s = parse_double(key, value);
    else if (field == "conn_thr") m.conn_thr = parse_double(key, value);
    else if (field == "epsilon") m.epsilon = parse_double(key, value);
    else if (field == "n_max") m.n_max = parse_long(key, value);
    else if (field == "maxcomp") {
        m.maxcomp_scaled = false;
        m.maxcomp_value = parse_double(key, value);
    } else if (field == "maxcomp_scale") {
        m.maxcomp_scaled = true;
        m.maxcomp_value = parse_double(key, value);
    } else {
        return false;
    }
    return true;
}

void write_map_block(std::ostream& out, const char* name, const MapParamsSpec& m) {
    out << name << ".a_t=" << fmt17(m.a_t) << '\n';
    out << name << ".beta=" << fmt17(m.beta) << '\n';
    out << name << ".conn_thr=" << fmt17(m.conn_thr) << '\n';
    out << name << ".e_b=" << fmt17(m.e_b) << '\n';
    out << name << ".e_n_factor=" << fmt17(m.e_n_factor) << '\n';
    out << name << ".epsilon=" << fmt17(m.epsilon) << '\n';
    out << name << ".lp=" << fmt17(m.lp) << '\n';
    out << name << (m.maxcomp_scaled ? ".maxcomp_scale=" : ".maxcomp=")
        << fmt17(m.maxcomp_value) << '\n';
    out << name << ".n_max=" << m.n_max << '\n';
    out << name << ".s=" << fmt17(m.s) << '\n';
}

}  // namespace

Params Params::defaults() {
    Params p;
    p.visual.a_t = 0.985;
    p.visual.lp = 0.0015;  // 0.15%
    p.visual.beta = 0.10;
    p.visual.maxcomp_scaled = true;
    p.visual.maxcomp_value = 0.021;
    p.visual.e_b = 5e-4;
    p.visual.e_n_factor = 12e-6;
    p.visual.s = 0.00758176;
    p.visual.conn_thr = 0.50;

    p.auditory.a_t = 0.935;
    p.auditory.lp = 1e-5;  // 0.001%
    p.auditory.beta = 0.10;
    p.auditory.maxcomp_scaled = true;
    p.auditory.maxcomp_value = 2.0;
    p.auditory.e_b = 0.10;
    p.auditory.e_n_factor = 14e-6;
    p.auditory.s = 0.00394;
    p.auditory.conn_thr = 0.50;

    p.association.a_t = 0.999;
    p.association.lp = 0.175211;  // 17.5211%
    p.association.beta = 0.870879;
    p.association.maxcomp_scaled = false;
    p.association.maxcomp_value = 10000;
    p.association.e_b = 0.465091;
    p.association.e_n_factor = 0.0134102;
    p.association.s = 1.31357;
    p.association.conn_thr = 0.986745;

    // context: Art2Params defaults already carry the tuned values.
    return p;
}

void Params::set(std::string_view key, std::string_view value) {
    const auto dot = key.find('.');
    if (dot == std::string_view::npos)
        throw_data("params: unknown key '" + std::string(key) + "'");
    const std::string_view block = key.substr(0, dot);
    const std::string_view field = key.substr(dot + 1);

    if (block == "visual" || block == "auditory" || block == "association") {
        MapParamsSpec& m = block == "visual" ? visual
                          : block == "auditory" ? auditory
                                                : association;
        if (!set_map_key(m, field, key, value))
            throw_data("params: unknown key '" + std::string(key) + "'");
        return;
    }
    if (block == "context") {
        if (field == "a") context.a = parse_double(key, value);
        else if (field == "b") context.b = parse_double(key, value);
        else if (field == "c") context.c = parse_double(key, value);
        else if (field == "d") context.d = parse_double(key, value);
        else if (field == "e") context.e = parse_double(key, value);
        else if (field == "theta") context.theta = parse_double(key, value);
        else if (field == "alpha") context.alpha = parse_double(key, value);
        else if (field == "rho") context.rho = parse_double(key, value);
        else if (field == "epochs") context.epochs = static_cast<int>(parse_long(key, value));
        else if (field == "n_iter") context.n_iter = static_cast<int>(parse_long(key, value));
        else if (field == "back") context.back = parse_double(key, value);
        else if (field == "cw") context.cw = parse_double(key, value);
        else if (field == "d_ctx") context.d_ctx = parse_double(key, value);
        else if (field == "alpha_ctx") context.alpha_ctx = parse_double(key, value);
        else if (field == "rho_step") context.rho_step = parse_double(key, value);
        else if (field == "rho_floor") context.rho_floor = parse_double(key, value);
        else throw_data("params: unknown key '" + std::string(key) + "'");
        return;
    }
    if (block == "codebook") {
        if (field == "passes") codebook.passes = static_cast<int>(parse_long(key, value));
        else if (field == "seed") codebook.seed = parse_u64(key, value);
        else throw_data("params: unknown key '" + std::string(key) + "'");
        return;
    }
    if (block == "pipeline") {
        if (field == "context_granularity") {
            if (value == "trial") context_granularity = ContextGranularity::per_trial;
            else if (value == "input") context_granularity = ContextGranularity::per_input;
            else throw_data("params: pipeline.context_granularity must be 'trial' or 'input'");
        } else {
            throw_data("params: unknown key '" + std::string(key) + "'");
        }
        return;
    }
    if (block == "representation") {
        if (field == "histogram_weighting") {
            if (value == "count") histogram_weighting = HistogramWeighting::count;
            else if (value == "binary") histogram_weighting = HistogramWeighting::binary;
            else throw_data("params: representation.histogram_weighting must be 'count' or 'binary'");
        } else {
            throw_data("params: unknown key '" + std::string(key) + "'");
        }
        return;
    }
    throw_data("params: unknown key '" + std::string(key) + "'");
}

void Params::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open params file '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        const auto begin = trimmed.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        trimmed = trimmed.substr(begin);
        if (trimmed.empty() || trimmed[0] == '#' || trimmed[0] == ';') continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw_data(path.string() + ":" + std::to_string(line_no) +
                       ": expected 'key=value'");
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        const std::string key = strip(trimmed.substr(0, eq));
        const std::string value = strip(trimmed.substr(eq + 1));
        try {
            set(key, value);
        } catch (const Error& err) {
            throw_data(path.string() + ":" + std::to_string(line_no) + ": " + err.what());
        }
    }
}

void Params::write(std::ostream& out) const {
    write_map_block(out, "association", association);
    write_map_block(out, "auditory", auditory);
    out << "codebook.passes=" << codebook.passes << '\n';
    out << "codebook.seed=" << codebook.seed << '\n';
    out << "context.a=" << fmt17(context.a) << '\n';
    out << "context.alpha=" << fmt17(context.alpha) << '\n';
    out << "context.alpha_ctx=" << fmt17(context.alpha_ctx) << '\n';
    out << "context.b=" << fmt17(context.b) << '\n';
    out << "context.back=" << fmt17(context.back) << '\n';
    out << "context.c=" << fmt17(context.c) << '\n';
    out << "context.cw=" << fmt17(context.cw) << '\n';
    out << "context.d=" << fmt17(context.d) << '\n';
    out << "context.d_ctx=" << fmt17(context.d_ctx) << '\n';
    out << "context.e=" << fmt17(context.e) << '\n';
    out << "context.epochs=" << context.epochs << '\n';
    out << "context.n_iter=" << context.n_iter << '\n';
    out << "context.rho=" << fmt17(context.rho) << '\n';
    out << "context.rho_floor=" << fmt17(context.rho_floor) << '\n';
    out << "context.rho_step=" << fmt17(context.rho_step) << '\n';
    out << "context.theta=" << fmt17(context.theta) << '\n';
    out << "pipeline.context_granularity="
        << (context_granularity == ContextGranularity::per_trial ? "trial" : "input")
        << '\n';
    out << "representation.histogram_weighting="
        << (histogram_weighting == HistogramWeighting::count ? "count" : "binary")
        << '\n';
    write_map_block(out, "visual", visual);
}

std::string Params::to_string() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

std::uint64_t Params::hash() const {
    const std::string text = to_string();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string Params::hash_hex() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash()));
    return buf;
}

}  // namespace wordmap
