#include "obp/expander.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <vector>

#include "obp/errors.hpp"

namespace obp {

namespace {

// Little multiword arithmetic mod 2^t on word spans.
void mask_top(std::vector<uint64_t>& a, int t) {
  if (t & 63) a.back() &= (uint64_t{1} << (t & 63)) - 1;
}

void add_into(std::vector<uint64_t>& a, const std::vector<uint64_t>& b, int t) {
  unsigned char carry = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t s = a[i] + b[i];
    unsigned char c1 = s < a[i];
    a[i] = s + carry;
    carry = c1 | (a[i] < s);
  }
  mask_top(a, t);
}

void sub_into(std::vector<uint64_t>& a, const std::vector<uint64_t>& b, int t) {
  unsigned char borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t d = a[i] - b[i];
    unsigned char b1 = a[i] < b[i];
    uint64_t d2 = d - borrow;
    borrow = b1 | (d < borrow);
    a[i] = d2;
  }
  mask_top(a, t);
}

std::vector<uint64_t> shl1(const std::vector<uint64_t>& a, int t) {
  std::vector<uint64_t> r(a.size());
  uint64_t carry = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    r[i] = (a[i] << 1) | carry;
    carry = a[i] >> 63;
  }
  mask_top(r, t);
  return r;
}

void add_one(std::vector<uint64_t>& a, int t) {
  for (size_t i = 0; i < a.size(); ++i)
    if (++a[i] != 0) break;
  mask_top(a, t);
}

}  // namespace

Bits expander_neighbor(const Bits& vertex, int label, int coord_bits) {
  if (coord_bits < 1 || (int)vertex.size() != 2 * coord_bits || label < 0 || label > 7)
    fail(Error::Code::invalid_params, "bad expander step");
  size_t nw = ((size_t)coord_bits + 63) / 64;
  std::vector<uint64_t> x(nw, 0), y(nw, 0);
  Bits xb = vertex.slice(0, coord_bits), yb = vertex.slice(coord_bits, coord_bits);
  for (size_t i = 0; i < xb.words().size(); ++i) x[i] = xb.words()[i];
  for (size_t i = 0; i < yb.words().size(); ++i) y[i] = yb.words()[i];

  bool on_x = label < 4;       // maps acting on the first coordinate
  bool subtract = label & 2;   // inverse direction
  bool plus_one = label & 1;   // the +1 variant
  auto& target = on_x ? x : y;
  auto step = shl1(on_x ? y : x, coord_bits);
  if (plus_one) add_one(step, coord_bits);
  if (subtract)
    sub_into(target, step, coord_bits);
  else
    add_into(target, step, coord_bits);

  Bits out(2 * (size_t)coord_bits);
  for (int i = 0; i < coord_bits; ++i) {
    out.set(i, (x[i >> 6] >> (i & 63)) & 1);
    out.set(coord_bits + i, (y[i >> 6] >> (i & 63)) & 1);
  }
  return out;
}

Bits expander_walk(const Bits& vertex, const Bits& labels, int coord_bits) {
  if (labels.size() % 3 != 0) fail(Error::Code::invalid_params, "walk labels must be 3 bits per step");
  Bits v = vertex;
  for (size_t s = 0; s * 3 < labels.size(); ++s) {
    int label = (labels.get(3 * s) ? 1 : 0) | (labels.get(3 * s + 1) ? 2 : 0) | (labels.get(3 * s + 2) ? 4 : 0);
    v = expander_neighbor(v, label, coord_bits);
  }
  return v;
}

double measured_second_eigenvalue(int coord_bits, int iterations) {
  if (coord_bits < 1 || coord_bits > 5) fail(Error::Code::invalid_params, "eigenvalue probe is for small grids");
  int m = 1 << coord_bits;
  int verts = m * m;
  // dense neighbor table
  std::vector<std::array<int, 8>> nbr(verts);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      Bits v(2 * (size_t)coord_bits);
      for (int i = 0; i < coord_bits; ++i) {
        v.set(i, (x >> i) & 1);
        v.set(coord_bits + i, (y >> i) & 1);
      }
      for (int l = 0; l < 8; ++l) {
        Bits w = expander_neighbor(v, l, coord_bits);
        int nx = 0, ny = 0;
        for (int i = 0; i < coord_bits; ++i) {
          nx |= (int)w.get(i) << i;
          ny |= (int)w.get(coord_bits + i) << i;
        }
        nbr[x + m * y][l] = nx + m * ny;
      }
    }

  auto mul = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (int v = 0; v < verts; ++v) {
      double acc = 0;
      for (int l = 0; l < 8; ++l) acc += in[nbr[v][l]];
      out[v] = acc / 8.0;
    }
  };
  auto deflate = [&](std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= verts;
    for (double& x : v) x -= mean;
  };
  auto norm = [&](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  std::vector<double> v(verts), w(verts);
  Rng rng(20240229);
  for (double& x : v) x = (double)rng.below(1000) / 1000.0;
  deflate(v);
  double lambda = 0;
  for (int it = 0; it < iterations; ++it) {
    mul(v, w);
    deflate(w);
    double nw = norm(w);
    if (nw == 0) return 0;
    lambda = nw / norm(v);
    for (int i = 0; i < verts; ++i) v[i] = w[i] / nw;
  }
  return lambda;
}

}  // namespace obp
