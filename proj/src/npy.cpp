// SPDX-License-Identifier: Apache-2.0
#include <vega/npy.hpp>

#include <cstring>
#include <fstream>

namespace vega::npy {

namespace {
constexpr char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

uint64_t shape_elements(const std::vector<uint64_t>& shape) {
  uint64_t n = 1;
  for (uint64_t d : shape) n *= d;
  return n;
}
}  // namespace

size_t array::item_size() const {
  if (descr == "<i2") return 2;
  if (descr == "<i4") return 4;
  throw error(strf("unsupported npy dtype '%s' (supported: <i2, <i4)", descr.c_str()));
}

uint64_t array::elements() const { return shape_elements(shape); }

array load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(strf("cannot open '%s'", path.c_str()));
  char magic[6];
  uint8_t ver[2];
  if (!in.read(magic, 6) || std::memcmp(magic, kMagic, 6) != 0)
    throw parse_error(strf("'%s' is not an npy file", path.c_str()));
  if (!in.read(reinterpret_cast<char*>(ver), 2))
    throw parse_error(strf("'%s': truncated npy header", path.c_str()));
  uint32_t hlen = 0;
  if (ver[0] == 1) {
    uint8_t b[2];
    if (!in.read(reinterpret_cast<char*>(b), 2))
      throw parse_error(strf("'%s': truncated npy header", path.c_str()));
    hlen = b[0] | (uint32_t(b[1]) << 8);
  } else if (ver[0] == 2) {
    uint8_t b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
      throw parse_error(strf("'%s': truncated npy header", path.c_str()));
    hlen = b[0] | (uint32_t(b[1]) << 8) | (uint32_t(b[2]) << 16) | (uint32_t(b[3]) << 24);
  } else {
    throw parse_error(strf("'%s': unsupported npy version %u.%u", path.c_str(), ver[0],
                           ver[1]));
  }
  std::string header(hlen, '\0');
  if (!in.read(header.data(), hlen))
    throw parse_error(strf("'%s': truncated npy header", path.c_str()));

  auto find_value = [&](const std::string& key) -> std::string {
    size_t p = header.find("'" + key + "'");
    if (p == std::string::npos)
      throw parse_error(strf("'%s': npy header missing key %s", path.c_str(), key.c_str()));
    p = header.find(':', p);
    if (p == std::string::npos)
      throw parse_error(strf("'%s': malformed npy header", path.c_str()));
    ++p;
    while (p < header.size() && header[p] == ' ') ++p;
    return header.substr(p);
  };

  array a;
  {
    std::string v = find_value("descr");
    if (v.empty() || v[0] != '\'')
      throw parse_error(strf("'%s': malformed descr", path.c_str()));
    size_t end = v.find('\'', 1);
    if (end == std::string::npos)
      throw parse_error(strf("'%s': malformed descr", path.c_str()));
    a.descr = v.substr(1, end - 1);
  }
  {
    std::string v = find_value("fortran_order");
    if (v.rfind("False", 0) != 0)
      throw parse_error(strf("'%s': fortran-order arrays are not supported", path.c_str()));
  }
  {
    std::string v = find_value("shape");
    if (v.empty() || v[0] != '(')
      throw parse_error(strf("'%s': malformed shape", path.c_str()));
    size_t end = v.find(')');
    if (end == std::string::npos)
      throw parse_error(strf("'%s': malformed shape", path.c_str()));
    std::string tuple = v.substr(1, end - 1);
    uint64_t cur = 0;
    bool have = false;
    for (char ch : tuple) {
      if (ch >= '0' && ch <= '9') {
        cur = cur * 10 + uint64_t(ch - '0');
        have = true;
      } else if (ch == ',' || ch == ' ') {
        if (have) a.shape.push_back(cur);
        cur = 0;
        have = false;
      } else {
        throw parse_error(strf("'%s': malformed shape", path.c_str()));
      }
    }
    if (have) a.shape.push_back(cur);
    if (a.shape.empty())
      throw parse_error(strf("'%s': scalar npy arrays are not supported", path.c_str()));
  }

  uint64_t bytes = a.elements() * a.item_size();
  a.data.resize(bytes);
  if (!in.read(reinterpret_cast<char*>(a.data.data()), std::streamsize(bytes)))
    throw parse_error(strf("'%s': truncated npy payload (want %llu bytes)", path.c_str(),
                           static_cast<unsigned long long>(bytes)));
  return a;
}

void save(const std::string& path, const array& a) {
  if (a.data.size() != a.elements() * a.item_size())
    throw error(strf("npy payload size %zu does not match shape", a.data.size()));
  std::string tuple;
  for (size_t i = 0; i < a.shape.size(); ++i) {
    if (i) tuple += ", ";
    tuple += std::to_string(a.shape[i]);
  }
  if (a.shape.size() == 1) tuple += ",";
  std::string dict =
      "{'descr': '" + a.descr + "', 'fortran_order': False, 'shape': (" + tuple + "), }";
  size_t unpadded = 6 + 2 + 2 + dict.size() + 1;
  size_t pad = (64 - unpadded % 64) % 64;
  dict.append(pad, ' ');
  dict += '\n';

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(strf("cannot write '%s'", path.c_str()));
  out.write(kMagic, 6);
  uint8_t ver[2] = {1, 0};
  out.write(reinterpret_cast<const char*>(ver), 2);
  uint16_t hlen = static_cast<uint16_t>(dict.size());
  uint8_t lb[2] = {uint8_t(hlen & 0xff), uint8_t(hlen >> 8)};
  out.write(reinterpret_cast<const char*>(lb), 2);
  out.write(dict.data(), std::streamsize(dict.size()));
  out.write(reinterpret_cast<const char*>(a.data.data()), std::streamsize(a.data.size()));
  if (!out) throw io_error(strf("write failed for '%s'", path.c_str()));
}

array from_i16(const std::vector<int16_t>& v, std::vector<uint64_t> shape) {
  if (shape_elements(shape) != v.size())
    throw error(strf("shape wants %llu elements, vector holds %zu",
                     static_cast<unsigned long long>(shape_elements(shape)), v.size()));
  array a;
  a.descr = "<i2";
  a.shape = std::move(shape);
  a.data.resize(v.size() * 2);
  for (size_t i = 0; i < v.size(); ++i) {
    uint16_t u = static_cast<uint16_t>(v[i]);
    a.data[2 * i] = uint8_t(u & 0xff);
    a.data[2 * i + 1] = uint8_t(u >> 8);
  }
  return a;
}

array from_i32(const std::vector<int32_t>& v, std::vector<uint64_t> shape) {
  if (shape_elements(shape) != v.size())
    throw error(strf("shape wants %llu elements, vector holds %zu",
                     static_cast<unsigned long long>(shape_elements(shape)), v.size()));
  array a;
  a.descr = "<i4";
  a.shape = std::move(shape);
  a.data.resize(v.size() * 4);
  for (size_t i = 0; i < v.size(); ++i) {
    uint32_t u = static_cast<uint32_t>(v[i]);
    for (int b = 0; b < 4; ++b) a.data[4 * i + b] = uint8_t((u >> (8 * b)) & 0xff);
  }
  return a;
}

std::vector<int16_t> to_i16(const array& a) {
  if (a.descr != "<i2") throw error(strf("expected dtype <i2, got '%s'", a.descr.c_str()));
  std::vector<int16_t> v(a.elements());
  for (size_t i = 0; i < v.size(); ++i)
    v[i] = static_cast<int16_t>(uint16_t(a.data[2 * i]) | (uint16_t(a.data[2 * i + 1]) << 8));
  return v;
}

std::vector<int32_t> to_i32(const array& a) {
  if (a.descr != "<i4") throw error(strf("expected dtype <i4, got '%s'", a.descr.c_str()));
  std::vector<int32_t> v(a.elements());
  for (size_t i = 0; i < v.size(); ++i) {
    uint32_t u = 0;
    for (int b = 0; b < 4; ++b) u |= uint32_t(a.data[4 * i + b]) << (8 * b);
    v[i] = static_cast<int32_t>(u);
  }
  return v;
}

}  // namespace vega::npy
