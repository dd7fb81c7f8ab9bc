#include "ckt/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace ckt {

std::string format_double(double v)
{
    std::array<char, 40> buf{};
    // %.17g round-trips; trim to the shortest representation that does
    for (int prec = 1; prec <= 17; ++prec) {
        const int len = std::snprintf(buf.data(), buf.size(), "%.*g", prec, v);
        if (len > 0 && std::strtod(buf.data(), nullptr) == v)
            return std::string(buf.data(), static_cast<std::size_t>(len));
    }
    const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return std::string(buf.data(), static_cast<std::size_t>(len));
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file for hashing: " + path.string());
    std::uint64_t h = 1469598103934665603ULL;
    std::array<char, 65536> buf;
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[static_cast<std::size_t>(i)]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

std::string csv_quote(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path.string());
    return out;
}

} // namespace

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << csv_quote(header[i]);
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

void write_density_csv(const std::filesystem::path& path, const DensityGrid& f)
{
    std::ofstream out = open_out(path);
    const std::size_t rank = f.spec.rank();
    out << (rank == 2 ? "q,p,f" : "q,p,z,f") << "\n";
    std::array<double, 3> x{};
    std::span<double> xs(x.data(), rank);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.spec.center(i, xs);
        for (std::size_t a = 0; a < rank; ++a)
            out << format_double(x[a]) << ",";
        out << format_double(f.values[i]) << "\n";
    }
}

void write_oneform_csv(const std::filesystem::path& path, const OneFormGrid& Pi)
{
    std::ofstream out = open_out(path);
    const std::size_t rank = Pi.spec.rank();
    out << (rank == 2 ? "q,p,Pi_q,Pi_p" : "q,p,z,Pi_q,Pi_p,Pi_z") << "\n";
    std::array<double, 3> x{};
    std::span<double> xs(x.data(), rank);
    for (std::size_t i = 0; i < Pi.comp[0].size(); ++i) {
        Pi.spec.center(i, xs);
        for (std::size_t a = 0; a < rank; ++a)
            out << format_double(x[a]) << ",";
        for (std::size_t a = 0; a < rank; ++a)
            out << format_double(Pi.comp[a][i]) << (a + 1 < rank ? "," : "\n");
    }
}

void write_pgm_heatmap(const std::filesystem::path& path, const DensityGrid& f)
{
    if (f.spec.is_contact())
        throw std::invalid_argument("PGM heatmaps are for symplectic (q,p) grids");
    const std::size_t nq = f.spec.axes[0].cells;
    const std::size_t np = f.spec.axes[1].cells;
    double lo = f.values[0], hi = f.values[0];
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    std::ofstream out = open_out(path, true);
    out << "P5\n" << nq << " " << np << "\n255\n";
    std::vector<unsigned char> row(nq);
    for (std::size_t ip = np; ip-- > 0;) { // top row = p max
        for (std::size_t iq = 0; iq < nq; ++iq) {
            const double v = (f.values[iq * np + ip] - lo) / span;
            row[iq] = static_cast<unsigned char>(std::lround(255.0 * v));
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()));
    }
}

namespace {

const char* series_color(std::size_t i)
{
    static const std::array<const char*, 6> palette = {"#1f77b4", "#d62728", "#2ca02c",
                                                       "#9467bd", "#ff7f0e", "#17becf"};
    return palette[i % palette.size()];
}

} // namespace

void write_svg_lineplot(const std::filesystem::path& path, const std::string& title,
                        const std::vector<PlotSeries>& series)
{
    bool has_points = false;
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("plot series with mismatched x/y lengths");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
                throw std::invalid_argument("plot series with non-finite data");
            if (!has_points) {
                xlo = xhi = s.x[i];
                ylo = yhi = s.y[i];
                has_points = true;
            } else {
                xlo = std::min(xlo, s.x[i]);
                xhi = std::max(xhi, s.x[i]);
                ylo = std::min(ylo, s.y[i]);
                yhi = std::max(yhi, s.y[i]);
            }
        }
    }
    if (!has_points)
        throw std::invalid_argument("no data");
    if (xhi == xlo)
        xhi = xlo + 1.0;
    if (yhi == ylo)
        yhi = ylo + 1.0;

    const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb); };

    std::ofstream out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
        << "\" height=\"" << H << "\">\n"
        << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n"
        << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
        << "\" height=\"" << H - mt - mb
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xlo + (xhi - xlo) * k / 4.0;
        const double yv = ylo + (yhi - ylo) * k / 4.0;
        out << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(xv) << "</text>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(yv) << "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        out << "<polyline fill=\"none\" stroke=\"" << series_color(s)
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            out << format_double(px(series[s].x[i])) << "," << format_double(py(series[s].y[i]))
                << " ";
        out << "\"/>\n";
        if (!series[s].label.empty())
            out << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 16 + 16 * s
                << "\" font-size=\"12\" fill=\"" << series_color(s) << "\">" << series[s].label
                << "</text>\n";
    }
    out << "</svg>\n";
}

JsonlWriter::JsonlWriter(std::filesystem::path path) : path_(std::move(path))
{
    open_out(path_); // truncate
}

void JsonlWriter::write_line(const std::string& json_object)
{
    std::ofstream out(path_, std::ios::app);
    if (!out)
        throw std::runtime_error("cannot append to " + path_.string());
    out << json_object << "\n";
}

} // namespace ckt
