#include "mhdmc/io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace mhdmc {

namespace {

constexpr char kStateMagic[8] = {'M', 'H', 'D', 'M', 'C', 'S', 'T', '1'};

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, mode);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void put_doubles(std::ostream& os, const std::vector<double>& v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::istream& is, std::size_t n) {
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw IoError("truncated state file");
  return v;
}

void scalars(std::ostream& os, const char* name, const CellField& f) {
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  char buf[32];
  for (std::size_t k = 0; k < f.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g\n", f[k]);
    os << buf;
  }
}

void vectors(std::ostream& os, const char* name, const CellVector& v) {
  os << "VECTORS " << name << " double\n";
  char buf[96];
  for (std::size_t k = 0; k < v.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g 0\n", v.c1[k], v.c2[k]);
    os << buf;
  }
}

}  // namespace

void write_vtk(const std::filesystem::path& path, const State& s, const BoundaryTraces& traces,
               const std::string& title) {
  std::ofstream os = open_out(path, std::ios::out | std::ios::trunc);
  const Mesh& m = s.mesh();
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << m.nx1() + 1 << ' ' << m.nx2() + 1 << " 1\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "ORIGIN %.17g %.17g 0\nSPACING %.17g %.17g 1\n", m.bounds().x1a,
                m.bounds().x2a, m.h(), m.h());
  os << buf << "CELL_DATA " << m.cell_count() << '\n';
  scalars(os, "rho", s.rho);
  vectors(os, "u", s.u);
  vectors(os, "B", s.B);
  scalars(os, "divB", div_cells(s.B, traces.magnetic));
  scalars(os, "curlB", curl_vec(s.B, traces.magnetic));
  if (!os) throw IoError("failed writing " + path.string());
}

void write_state_binary(const std::filesystem::path& path, const State& s) {
  std::ofstream os = open_out(path, std::ios::out | std::ios::binary | std::ios::trunc);
  const Mesh& m = s.mesh();
  os.write(kStateMagic, sizeof kStateMagic);
  const std::int32_t n[2] = {m.nx1(), m.nx2()};
  os.write(reinterpret_cast<const char*>(n), sizeof n);
  const double b[4] = {m.bounds().x1a, m.bounds().x1b, m.bounds().x2a, m.bounds().x2b};
  os.write(reinterpret_cast<const char*>(b), sizeof b);
  put_doubles(os, s.rho.data());
  put_doubles(os, s.u.c1.data());
  put_doubles(os, s.u.c2.data());
  put_doubles(os, s.B.c1.data());
  put_doubles(os, s.B.c2.data());
  if (!os) throw IoError("failed writing " + path.string());
}

State read_state_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kStateMagic, sizeof magic) != 0) {
    throw IoError(path.string() + " is not a state dump");
  }
  std::int32_t n[2];
  double b[4];
  is.read(reinterpret_cast<char*>(n), sizeof n);
  is.read(reinterpret_cast<char*>(b), sizeof b);
  if (!is) throw IoError("truncated state file");
  const Mesh m = build_mesh(n[0], n[1], Bounds{b[0], b[1], b[2], b[3]});
  const std::size_t c = m.cell_count();
  CellField rho(m, get_doubles(is, c));
  CellField u1(m, get_doubles(is, c)), u2(m, get_doubles(is, c));
  CellField B1(m, get_doubles(is, c)), B2(m, get_doubles(is, c));
  return State(std::move(rho), CellVector(std::move(u1), std::move(u2)),
               CellVector(std::move(B1), std::move(B2)));
}

}  // namespace mhdmc
