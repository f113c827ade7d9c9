#include "pixelent/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace pixelent {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

// ---------------------------------------------------------------------------

void write_count_csv(const std::filesystem::path& path, const CountsMatrix& counts) {
    auto out = open_output(path);
    for (Eigen::Index i = 0; i < counts.rows(); ++i) {
        for (Eigen::Index j = 0; j < counts.cols(); ++j) {
            if (j) out << ',';
            out << counts(i, j);
        }
        out << '\n';
    }
}

CountsMatrix read_count_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<std::vector<std::int64_t>> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::vector<std::int64_t> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                const long long v = std::stoll(trim(cell), &pos);
                if (pos != trim(cell).size() || v < 0) throw std::invalid_argument("");
                row.push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error(path.string() +
                                         ": count cells must be non-negative integers");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path.string() + ": empty count file");
    const std::size_t d = rows.size();
    CountsMatrix counts(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d)
            throw std::runtime_error(path.string() + ": row " + std::to_string(i) +
                                     " has " + std::to_string(rows[i].size()) +
                                     " cells, expected " + std::to_string(d));
        for (std::size_t j = 0; j < d; ++j) counts(i, j) = rows[i][j];
    }
    return counts;
}

// ---------------------------------------------------------------------------

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    json doc;
    doc["d"] = manifest.d;
    doc["seed"] = manifest.seed;
    if (manifest.layout_file) doc["layout"] = manifest.layout_file->string();
    if (manifest.jtma) {
        doc["jtma"] = {{"sigma_p", manifest.jtma->sigma_p},
                       {"sigma_s", manifest.jtma->sigma_s},
                       {"sigma_c", manifest.jtma->sigma_c},
                       {"sinc_prefactor", manifest.jtma->sinc_prefactor}};
    }
    doc["settings"] = json::array();
    for (const auto& e : manifest.entries) {
        json entry = {{"basis_a", to_string(e.basis_a)},
                      {"basis_b", to_string(e.basis_b)},
                      {"conjugate_b", e.basis_b.conjugate},
                      {"counts", e.counts_file.string()}};
        if (e.acquisition_time_s) entry["acquisition_time_s"] = *e.acquisition_time_s;
        doc["settings"].push_back(std::move(entry));
    }
    open_output(path) << doc.dump(2) << '\n';
}

Manifest read_manifest(const std::filesystem::path& path) {
    json doc;
    try {
        open_input(path) >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
    }
    Manifest m;
    try {
        m.d = doc.at("d").get<int>();
        m.seed = doc.value("seed", std::uint64_t{0});
        if (doc.contains("layout"))
            m.layout_file = std::filesystem::path(doc["layout"].get<std::string>());
        if (doc.contains("jtma")) {
            JtmaParams p;
            p.sigma_p = doc["jtma"].at("sigma_p").get<double>();
            p.sigma_s = doc["jtma"].at("sigma_s").get<double>();
            p.sigma_c = doc["jtma"].at("sigma_c").get<double>();
            p.sinc_prefactor = doc["jtma"].value("sinc_prefactor", 1.0);
            m.jtma = p;
        }
        for (const auto& entry : doc.at("settings")) {
            ManifestEntry e;
            e.basis_a = parse_basis_spec(entry.at("basis_a").get<std::string>());
            e.basis_b = parse_basis_spec(entry.at("basis_b").get<std::string>());
            e.basis_b.conjugate = entry.value("conjugate_b", true);
            e.counts_file = std::filesystem::path(entry.at("counts").get<std::string>());
            if (entry.contains("acquisition_time_s"))
                e.acquisition_time_s = entry["acquisition_time_s"].get<double>();
            m.entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": bad manifest: " + e.what());
    }
    if (m.d <= 0) throw std::runtime_error(path.string() + ": d must be positive");
    return m;
}

std::vector<CountMatrix> load_manifest_counts(const std::filesystem::path& path,
                                              const Manifest& manifest) {
    const std::filesystem::path base = path.parent_path();
    std::vector<CountMatrix> result;
    for (const auto& entry : manifest.entries) {
        CountMatrix cm;
        cm.d = manifest.d;
        cm.basis_a = entry.basis_a;
        cm.basis_b = entry.basis_b;
        cm.acquisition_time_s = entry.acquisition_time_s;
        cm.counts = read_count_csv(entry.counts_file.is_absolute()
                                       ? entry.counts_file
                                       : base / entry.counts_file);
        if (cm.counts.rows() != manifest.d)
            throw std::runtime_error(entry.counts_file.string() + ": dimension " +
                                     std::to_string(cm.counts.rows()) +
                                     " does not match manifest d=" +
                                     std::to_string(manifest.d));
        cm.validate();
        result.push_back(std::move(cm));
    }
    return result;
}

// ---------------------------------------------------------------------------

void write_layout_json(const std::filesystem::path& path, const PixelLayout& layout) {
    json doc;
    doc["d"] = layout.d;
    doc["enclosing_radius"] = layout.enclosing_radius;
    doc["centers"] = json::array();
    doc["radii"] = json::array();
    for (int i = 0; i < layout.d; ++i) {
        doc["centers"].push_back({layout.centers[i].x, layout.centers[i].y});
        doc["radii"].push_back(layout.radii[i]);
    }
    open_output(path) << doc.dump(2) << '\n';
}

PixelLayout read_layout_json(const std::filesystem::path& path) {
    json doc;
    try {
        open_input(path) >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
    }
    PixelLayout layout;
    try {
        layout.d = doc.at("d").get<int>();
        layout.enclosing_radius = doc.at("enclosing_radius").get<double>();
        for (const auto& c : doc.at("centers"))
            layout.centers.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        for (const auto& r : doc.at("radii")) layout.radii.push_back(r.get<double>());
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": bad layout: " + e.what());
    }
    layout.validate();
    return layout;
}

// ---------------------------------------------------------------------------

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::stringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key=value");
        cfg.sections_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

Config Config::parse_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw std::runtime_error("config: missing [" + section + "] " + key);
    return sections_.at(section).at(key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("config: [" + section + "] " + key +
                                 " is not a number: '" + v + "'");
    }
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

int Config::get_int_or(const std::string& section, const std::string& key,
                       int fallback) const {
    if (!has(section, key)) return fallback;
    const double v = get_double(section, key);
    if (v != std::floor(v))
        throw std::runtime_error("config: [" + section + "] " + key +
                                 " must be an integer");
    return static_cast<int>(v);
}

std::uint64_t Config::get_u64_or(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key);
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("config: [" + section + "] " + key +
                                 " is not an unsigned integer: '" + v + "'");
    }
}

bool Config::get_bool_or(const std::string& section, const std::string& key,
                         bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::runtime_error("config: [" + section + "] " + key +
                             " must be a boolean, got '" + v + "'");
}

// ---------------------------------------------------------------------------

namespace {

// Perceptually even enough for a coincidence heatmap: black-body style ramp.
std::string heat_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(255.0 * std::min(1.0, 2.5 * t));
    const int g = static_cast<int>(255.0 * std::clamp(2.0 * t - 0.5, 0.0, 1.0));
    const int b = static_cast<int>(255.0 * std::clamp(4.0 * t - 3.0, 0.0, 1.0));
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

void write_heatmap_svg(const std::filesystem::path& path,
                       const Eigen::MatrixXd& values, const std::string& title) {
    const int d = static_cast<int>(values.rows());
    const double cell = 16.0;
    const double margin = 24.0;
    const double size = d * cell + 2 * margin;
    const double max_v = std::max(values.maxCoeff(), 1e-300);

    auto out = open_output(path);
    out << std::setprecision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
        << "\" height=\"" << size + 20 << "\" viewBox=\"0 0 " << size << ' '
        << size + 20 << "\">\n";
    out << "<text x=\"" << margin << "\" y=\"16\" font-family=\"sans-serif\" "
           "font-size=\"12\">" << title << "</text>\n";
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out << "<rect x=\"" << margin + j * cell << "\" y=\""
                << 20 + margin + i * cell << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\""
                << heat_color(values(i, j) / max_v) << "\"/>\n";
    out << "</svg>\n";
}

void write_layout_svg(const std::filesystem::path& path, const PixelLayout& layout) {
    const double scale = 240.0 / layout.enclosing_radius;
    const double size = 520.0;
    const double cx = size / 2, cy = size / 2;
    auto out = open_output(path);
    out << std::setprecision(8);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
        << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << ' ' << size
        << "\">\n";
    out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\""
        << layout.enclosing_radius * scale
        << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    for (int i = 0; i < layout.d; ++i) {
        out << "<circle cx=\"" << cx + layout.centers[i].x * scale << "\" cy=\""
            << cy - layout.centers[i].y * scale << "\" r=\""
            << layout.radii[i] * scale
            << "\" fill=\"#4477aa55\" stroke=\"#224\"/>\n";
        out << "<text x=\"" << cx + layout.centers[i].x * scale << "\" y=\""
            << cy - layout.centers[i].y * scale + 3
            << "\" font-family=\"sans-serif\" font-size=\"9\" "
               "text-anchor=\"middle\">" << i << "</text>\n";
    }
    out << "</svg>\n";
}

void write_phase_mask_pgm(const std::filesystem::path& path, const PhaseMask& mask) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
    const double two_pi = 2.0 * 3.14159265358979323846;
    std::vector<unsigned char> row(mask.width);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * mask.width + x;
            row[x] = mask.on[idx]
                         ? static_cast<unsigned char>(
                               std::lround(mask.phase[idx] / two_pi * 255.0))
                         : 0;
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
}

}  // namespace pixelent
