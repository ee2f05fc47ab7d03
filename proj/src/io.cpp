#include "plap/io.hpp"

#include "plap/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace plap::io {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

nlohmann::json RunConfig::to_json() const
{
    return {{"command", command}, {"params", params}, {"seed", seed}};
}

std::string RunConfig::hash() const
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json().dump())));
    return buf;
}

std::string RunConfig::csv_comment() const
{
    return "# plap " + std::string(kVersion) + " config=" + hash() + " seed=" + std::to_string(seed) + "\n";
}

nlohmann::json RunConfig::meta() const
{
    return {{"version", std::string(kVersion)}, {"config", hash()}, {"seed", seed}, {"command", command}};
}

void write_file(const std::string& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Validation, "cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    require(static_cast<bool>(out), ErrorKind::Validation, "failed writing " + path);
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Validation, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Random::Random(std::uint64_t seed) : engine_(seed) {}

double Random::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

namespace {

// Diverging palette, cold to warm.
constexpr const char* kPalette[kRenderLevels] = {"#313695", "#4575b4", "#74add1", "#abd9e9", "#e0f3f8", "#f7f7d0",
                                                 "#fee090", "#fdae61", "#f46d43", "#d73027", "#a50026", "#67001f"};

double percentile(std::vector<double> sorted_values, double q)
{
    const double pos = q * static_cast<double>(sorted_values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t j = std::min(i + 1, sorted_values.size() - 1);
    const double t = pos - static_cast<double>(i);
    return sorted_values[i] * (1.0 - t) + sorted_values[j] * t;
}

}  // namespace

std::string render_svg(const std::function<double(double, double)>& f, const RenderWindow& w, const RunConfig& config,
                       std::string_view title)
{
    require(w.width > 0 && w.height > 0 && w.xmax > w.xmin && w.ymax > w.ymin, ErrorKind::Validation,
            "render: invalid window");
    std::vector<double> values(static_cast<std::size_t>(w.width) * static_cast<std::size_t>(w.height));
    std::vector<double> finite;
    for (int j = 0; j < w.height; ++j) {
        // Row 0 is the top of the picture.
        const double y = w.ymax - (j + 0.5) * (w.ymax - w.ymin) / w.height;
        for (int i = 0; i < w.width; ++i) {
            const double x = w.xmin + (i + 0.5) * (w.xmax - w.xmin) / w.width;
            const double v = f(x, y);
            values[static_cast<std::size_t>(j) * static_cast<std::size_t>(w.width) + static_cast<std::size_t>(i)] = v;
            if (std::isfinite(v)) {
                finite.push_back(v);
            }
        }
    }
    double lo = 0.0, hi = 0.0;
    if (!finite.empty()) {
        std::sort(finite.begin(), finite.end());
        lo = percentile(finite, 0.02);
        hi = percentile(finite, 0.98);
    }
    auto band = [&](double v) {
        if (!std::isfinite(v)) {
            return -1;
        }
        if (!(hi > lo)) {
            return 0;
        }
        const int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * kRenderLevels));
        return std::clamp(b, 0, kRenderLevels - 1);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w.width << "\" height=\"" << w.height
        << "\" viewBox=\"0 0 " << w.width << ' ' << w.height << "\" shape-rendering=\"crispEdges\">\n";
    svg << "<!-- plap " << kVersion << " config=" << config.hash() << " seed=" << config.seed << " levels="
        << kRenderLevels << " lo=" << fmt17(lo) << " hi=" << fmt17(hi) << " window=" << fmt17(w.xmin) << ','
        << fmt17(w.xmax) << ',' << fmt17(w.ymin) << ',' << fmt17(w.ymax) << " -->\n";
    svg << "<title>" << title << "</title>\n";
    // One path per band; each horizontal run of equal bands is one rectangle.
    std::vector<std::string> paths(kRenderLevels);
    for (int j = 0; j < w.height; ++j) {
        int i = 0;
        while (i < w.width) {
            const int b = band(values[static_cast<std::size_t>(j) * static_cast<std::size_t>(w.width) +
                                      static_cast<std::size_t>(i)]);
            int end = i + 1;
            while (end < w.width && band(values[static_cast<std::size_t>(j) * static_cast<std::size_t>(w.width) +
                                                static_cast<std::size_t>(end)]) == b) {
                ++end;
            }
            if (b >= 0) {
                paths[static_cast<std::size_t>(b)] += "M" + std::to_string(i) + " " + std::to_string(j) + "h" +
                                                      std::to_string(end - i) + "v1h-" + std::to_string(end - i) + "z";
            }
            i = end;
        }
    }
    for (int b = 0; b < kRenderLevels; ++b) {
        if (!paths[static_cast<std::size_t>(b)].empty()) {
            svg << "<path fill=\"" << kPalette[b] << "\" d=\"" << paths[static_cast<std::size_t>(b)] << "\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace plap::io
