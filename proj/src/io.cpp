#include "anisowave/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace anisowave {

namespace {

constexpr std::uint32_t kGridVersion = 1;
constexpr std::uint32_t kTreeVersion = 1;

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("truncated file");
    return v;
}

void put_doubles(std::ostream& os, const std::vector<double>& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::istream& is, std::vector<double>& v, std::size_t n) {
    v.resize(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw std::runtime_error("truncated file");
}

void expect_magic(std::istream& is, const char* magic) {
    char buf[4];
    is.read(buf, 4);
    if (!is || std::memcmp(buf, magic, 4) != 0)
        throw std::runtime_error(std::string("bad magic, expected ") + magic);
}

}  // namespace

void write_grid(const Grid& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write("AWGR", 4);
    put<std::uint32_t>(os, kGridVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
    for (std::size_t d : g.dims) put<std::uint64_t>(os, d);
    for (const auto& [lo, hi] : g.box) {
        put<double>(os, lo);
        put<double>(os, hi);
    }
    put_doubles(os, g.data);
    if (!os) throw std::runtime_error("failed writing " + path);
}

Grid read_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    expect_magic(is, "AWGR");
    const auto version = get<std::uint32_t>(is);
    if (version != kGridVersion) throw std::runtime_error("unsupported grid file version");
    const auto D = get<std::uint32_t>(is);
    if (D == 0 || D > 16) throw std::runtime_error("implausible grid dimension");
    std::vector<std::size_t> dims(D);
    for (auto& d : dims) d = static_cast<std::size_t>(get<std::uint64_t>(is));
    std::vector<std::array<double, 2>> box(D);
    for (auto& b : box) {
        b[0] = get<double>(is);
        b[1] = get<double>(is);
    }
    Grid g = make_grid(std::move(dims), std::move(box));
    get_doubles(is, g.data, g.size());
    return g;
}

void write_tree(const CoefficientTree& tree, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os.write("AWTR", 4);
    put<std::uint32_t>(os, kTreeVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(tree.aniso.dim));
    for (int b : tree.aniso.b) put<std::uint32_t>(os, static_cast<std::uint32_t>(b));
    put<std::int64_t>(os, tree.aniso.norm_sum.numerator());
    put<std::int64_t>(os, tree.aniso.norm_sum.denominator());
    put<std::uint32_t>(os, static_cast<std::uint32_t>(tree.bank.moments));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(tree.bank.dual_moments));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(tree.boundary));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(tree.depth));
    for (std::size_t d : tree.grid_dims) put<std::uint64_t>(os, d);
    for (const auto& [lo, hi] : tree.box) {
        put<double>(os, lo);
        put<double>(os, hi);
    }
    put_doubles(os, tree.coarse);
    for (const auto& bands : tree.levels) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(bands.size()));
        for (const Band& b : bands) {
            put<std::uint32_t>(os, static_cast<std::uint32_t>(b.axis));
            put<std::uint32_t>(os, static_cast<std::uint32_t>(b.substep));
            for (std::size_t s : b.shape) put<std::uint64_t>(os, s);
            put_doubles(os, b.data);
        }
    }
    if (!os) throw std::runtime_error("failed writing " + path);
}

CoefficientTree read_tree(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    expect_magic(is, "AWTR");
    const auto version = get<std::uint32_t>(is);
    if (version != kTreeVersion) throw std::runtime_error("unsupported tree file version");
    const auto D = get<std::uint32_t>(is);
    if (D == 0 || D > 16) throw std::runtime_error("implausible tree dimension");
    std::vector<int> b(D);
    for (auto& v : b) v = static_cast<int>(get<std::uint32_t>(is));
    const auto num = get<std::int64_t>(is);
    const auto den = get<std::int64_t>(is);
    const Anisotropy aniso = make_anisotropy(b, Rational(num, den));
    const auto L = get<std::uint32_t>(is);
    const auto Ld = get<std::uint32_t>(is);
    const auto boundary = static_cast<Boundary>(get<std::uint32_t>(is));
    const auto depth = get<std::uint32_t>(is);

    std::vector<std::size_t> dims(D);
    for (auto& d : dims) d = static_cast<std::size_t>(get<std::uint64_t>(is));
    std::vector<std::array<double, 2>> box(D);
    for (auto& bx : box) {
        bx[0] = get<double>(is);
        bx[1] = get<double>(is);
    }

    // Reconstruct the structural metadata by replaying the schedule on a zero
    // grid, then fill in the stored coefficients.
    Grid shell = make_grid(dims, box);
    CoefficientTree tree = forward(shell, make_spline_filters(static_cast<int>(L),
                                                              static_cast<int>(Ld)),
                                   aniso, static_cast<int>(depth), boundary);
    get_doubles(is, tree.coarse, tree.coarse.size());
    for (auto& bands : tree.levels) {
        const auto nb = get<std::uint32_t>(is);
        if (nb != bands.size()) throw std::runtime_error("tree band directory mismatch");
        for (Band& band : bands) {
            const auto axis = get<std::uint32_t>(is);
            const auto substep = get<std::uint32_t>(is);
            if (static_cast<int>(axis) != band.axis || static_cast<int>(substep) != band.substep)
                throw std::runtime_error("tree band directory mismatch");
            for (std::size_t s : band.shape)
                if (get<std::uint64_t>(is) != s)
                    throw std::runtime_error("tree band shape mismatch");
            get_doubles(is, band.data, band.size());
        }
    }
    return tree;
}

}  // namespace anisowave
