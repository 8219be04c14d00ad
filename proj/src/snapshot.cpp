#include "mhd/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "mhd/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace mhd {

namespace {

constexpr char kMagic[4] = {'M', 'H', 'D', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& f, std::uint32_t v) {
    f.write(reinterpret_cast<const char*>(&v), 4);
}
void put_f64(std::ofstream& f, double v) { f.write(reinterpret_cast<const char*>(&v), 8); }

std::uint32_t get_u32(std::ifstream& f, const std::string& path) {
    std::uint32_t v;
    if (!f.read(reinterpret_cast<char*>(&v), 4)) throw Error("snapshot truncated: " + path);
    return v;
}
double get_f64(std::ifstream& f, const std::string& path) {
    double v;
    if (!f.read(reinterpret_cast<char*>(&v), 8)) throw Error("snapshot truncated: " + path);
    return v;
}

void write_members(const std::string& path, const GridSpec& g,
                   const std::vector<const SpectralVectorField*>& members) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_snapshot: cannot open " + path);
    f.write(kMagic, 4);
    put_u32(f, kVersion);
    put_u32(f, static_cast<std::uint32_t>(g.N));
    put_f64(f, g.L);
    put_u32(f, 3);
    put_u32(f, static_cast<std::uint32_t>(members.size()));
    for (const auto* m : members)
        for (int d = 0; d < 3; ++d)
            f.write(reinterpret_cast<const char*>(m->c[d].data()),
                    static_cast<std::streamsize>(m->c[d].size() * sizeof(cplx)));
    if (!f) throw Error("write_snapshot: short write to " + path);
}

}  // namespace

void write_snapshot(const std::string& path, const SpectralVectorField& f) {
    write_members(path, f.grid, {&f});
}

void write_snapshot(const std::string& path, const ForcingSequence& seq) {
    if (seq.empty()) throw DomainError("write_snapshot: empty forcing sequence");
    std::vector<const SpectralVectorField*> ptrs;
    for (const auto& m : seq.members) ptrs.push_back(&m);
    write_members(path, seq.members.front().grid, ptrs);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("read_snapshot: cannot open " + path);
    char magic[4];
    if (!f.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw Error("read_snapshot: bad magic in " + path);

    Snapshot snap;
    snap.version = get_u32(f, path);
    if (snap.version != kVersion) throw Error("read_snapshot: unsupported version in " + path);
    snap.N = static_cast<int>(get_u32(f, path));
    snap.L = get_f64(f, path);
    snap.components = get_u32(f, path);
    const std::uint32_t K = get_u32(f, path);
    if (snap.N < 2 || snap.N % 2 != 0 || !(snap.L > 0.0) || snap.components != 3 || K == 0)
        throw Error("read_snapshot: invalid header in " + path);

    GridSpec g;
    g.N = snap.N;
    g.L = snap.L;
    const std::size_t count = g.point_count();
    snap.members.reserve(K);
    for (std::uint32_t m = 0; m < K; ++m) {
        SpectralVectorField field(g);
        for (int d = 0; d < 3; ++d)
            if (!f.read(reinterpret_cast<char*>(field.c[d].data()),
                        static_cast<std::streamsize>(count * sizeof(cplx))))
                throw Error("snapshot truncated: " + path);
        snap.members.push_back(std::move(field));
    }
    if (f.peek() != std::ifstream::traits_type::eof())
        throw Error("read_snapshot: trailing bytes in " + path);
    return snap;
}

SpectralVectorField read_snapshot_field(const std::string& path, const GridSpec& proto) {
    Snapshot snap = read_snapshot(path);
    if (snap.members.size() != 1)
        throw Error("read_snapshot_field: expected a single member in " + path);
    if (snap.N != proto.N || std::abs(snap.L - proto.L) > 1e-12 * proto.L)
        throw SizeMismatchError("read_snapshot_field: snapshot mesh differs from config mesh");
    SpectralVectorField out = std::move(snap.members.front());
    out.grid = proto;
    return out;
}

}  // namespace mhd
