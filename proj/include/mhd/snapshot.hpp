#ifndef MHD_SNAPSHOT_HPP
#define MHD_SNAPSHOT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mhd/fields.hpp"

namespace mhd {

// Binary coefficient snapshot. Layout (little endian throughout):
//   bytes 0..3   magic "MHDF"
//   u32          version (currently 1)
//   u32          N (grid points per axis)
//   f64          L (box edge)
//   u32          components per member (3 for vector fields)
//   u32          K (member count; 1 for a single field)
// followed by K * components arrays of N^3 complex doubles (re, im) in
// row-major k-order, matching the in-memory coefficient layout.
struct Snapshot {
    std::uint32_t version = 1;
    int N = 0;
    double L = 0.0;
    std::uint32_t components = 3;
    std::vector<SpectralVectorField> members;  // grids carry only N and L
};

void write_snapshot(const std::string& path, const SpectralVectorField& f);
void write_snapshot(const std::string& path, const ForcingSequence& seq);

// Error on bad magic, version, truncation, or trailing bytes.
Snapshot read_snapshot(const std::string& path);

// Single-field convenience: reads, checks N and L against proto (1e-12
// relative on L), and returns the field stamped with proto's full mesh
// (dt, T, viscosities).
SpectralVectorField read_snapshot_field(const std::string& path, const GridSpec& proto);

}  // namespace mhd

#endif
