#include "zsm/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace zsm {

namespace {

void write_header(std::ofstream& out, const Grid& g) {
    out.write("ZSMF", 4);
    const std::uint32_t version = kZsmfVersion;
    const std::uint32_t dims = static_cast<std::uint32_t>(g.dims());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&dims), 4);
    for (int a = 0; a < g.dims(); ++a) {
        const std::uint32_t p = static_cast<std::uint32_t>(g.points(a));
        out.write(reinterpret_cast<const char*>(&p), 4);
    }
    for (int a = 0; a < g.dims(); ++a) {
        const double e = g.extent(a);
        out.write(reinterpret_cast<const char*>(&e), 8);
    }
}

} // namespace

void write_zsmf(const std::string& path, const Grid& g, const cvec& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("zsmf: cannot open " + path);
    write_header(out, g);
    for (const auto& z : field) {
        const double re = z.real(), im = z.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

void write_zsmf(const std::string& path, const Grid& g, const dvec& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("zsmf: cannot open " + path);
    write_header(out, g);
    for (double v : field)
        out.write(reinterpret_cast<const char*>(&v), 8);
}

ZsmfContents read_zsmf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("zsmf: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, "ZSMF", 4) != 0)
        throw std::runtime_error("zsmf: bad magic in " + path);
    std::uint32_t version = 0, dims = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&dims), 4);
    if (version != kZsmfVersion)
        throw std::runtime_error("zsmf: unsupported version");
    std::vector<int> points(dims);
    std::vector<double> extent(dims);
    for (auto& p : points) {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        p = static_cast<int>(v);
    }
    for (auto& e : extent)
        in.read(reinterpret_cast<char*>(&e), 8);
    ZsmfContents c;
    c.grid = make_grid(static_cast<int>(dims), points, extent);
    const std::size_t n = c.grid.size();
    // payload size decides real vs complex
    const auto payload_start = in.tellg();
    in.seekg(0, std::ios::end);
    const std::size_t bytes = static_cast<std::size_t>(in.tellg() - payload_start);
    in.seekg(payload_start);
    if (bytes == n * 16) {
        c.is_complex = true;
        c.complex_field.resize(n);
        for (auto& z : c.complex_field) {
            double re, im;
            in.read(reinterpret_cast<char*>(&re), 8);
            in.read(reinterpret_cast<char*>(&im), 8);
            z = cplx(re, im);
        }
    } else if (bytes == n * 8) {
        c.real_field.resize(n);
        for (auto& v : c.real_field)
            in.read(reinterpret_cast<char*>(&v), 8);
    } else {
        throw std::runtime_error("zsmf: payload size matches neither real nor complex field");
    }
    return c;
}

void write_csv_slice(const std::string& path, const Grid& g, const dvec& field) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("csv: cannot open " + path);
    out << "x,value\n";
    char buf[80];
    for (int i = 0; i < g.points(0); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", g.coord(0, i), field[i]);
        out << buf;
    }
}

void write_csv_slice(const std::string& path, const Grid& g, const cvec& field) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("csv: cannot open " + path);
    out << "x,re,im\n";
    char buf[120];
    for (int i = 0; i < g.points(0); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", g.coord(0, i), field[i].real(),
                      field[i].imag());
        out << buf;
    }
}

void write_series_csv(const std::string& path, const std::vector<Series>& series) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("csv: cannot open " + path);
    out << "x,y,series\n";
    char buf[120];
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,", s.x[i], s.y[i]);
            out << buf << s.label << "\n";
        }
}

void write_trajectories_csv(const std::string& path, const std::vector<double>& times,
                            const std::vector<std::vector<std::vector<double>>>& positions) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("csv: cannot open " + path);
    const int dims = positions.empty() || positions[0].empty()
                         ? 1
                         : static_cast<int>(positions[0][0].size());
    out << "t,walker";
    for (int a = 0; a < dims; ++a)
        out << ",x" << a;
    out << "\n";
    char buf[64];
    for (std::size_t t = 0; t < times.size(); ++t)
        for (std::size_t w = 0; w < positions[t].size(); ++w) {
            std::snprintf(buf, sizeof(buf), "%.17g,%zu", times[t], w);
            out << buf;
            for (int a = 0; a < dims; ++a) {
                std::snprintf(buf, sizeof(buf), ",%.17g", positions[t][w][a]);
                out << buf;
            }
            out << "\n";
        }
}

void write_svg_chart(const std::string& path, const std::vector<Series>& series,
                     const std::string& title) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) {
        xmin -= 1;
        xmax += 1;
    }
    if (!(ymax > ymin)) {
        ymin -= 1;
        ymax += 1;
    }
    const double W = 720, H = 480, mL = 60, mR = 20, mT = 40, mB = 40;
    auto px = [&](double x) { return mL + (x - xmin) / (xmax - xmin) * (W - mL - mR); };
    auto py = [&](double y) { return H - mB - (y - ymin) / (ymax - ymin) * (H - mT - mB); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("svg: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
        << "</text>\n";
    out << "<rect x=\"" << mL << "\" y=\"" << mT << "\" width=\"" << W - mL - mR << "\" height=\""
        << H - mT - mB << "\" fill=\"none\" stroke=\"black\"/>\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", ymin);
    out << "<text x=\"8\" y=\"" << py(ymin) << "\" font-size=\"11\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", ymax);
    out << "<text x=\"8\" y=\"" << py(ymax) + 10 << "\" font-size=\"11\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", xmin);
    out << "<text x=\"" << px(xmin) << "\" y=\"" << H - 12 << "\" font-size=\"11\">" << buf
        << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", xmax);
    out << "<text x=\"" << px(xmax) - 30 << "\" y=\"" << H - 12 << "\" font-size=\"11\">" << buf
        << "</text>\n";
    int ci = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << colors[ci % 6] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << W - mR - 150 << "\" y=\"" << mT + 16 + 14 * ci
            << "\" font-size=\"12\" fill=\"" << colors[ci % 6] << "\">" << s.label << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

std::uint64_t file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("checksum: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf)))
            break;
    }
    return h;
}

} // namespace zsm
