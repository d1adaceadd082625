#include "lunet/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace lunet::nn {

namespace {

constexpr char kMagic[4] = {'L', 'U', 'N', 'T'};
constexpr uint32_t kVersion = 1;

void put_u16(std::string& out, uint16_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char(v >> 8));
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

struct Reader {
  const uint8_t* p;
  size_t left;
  const std::string& path;

  void need(size_t n) {
    require(left >= n, ErrorKind::MalformedCheckpoint, path + ": truncated checkpoint");
  }
  uint16_t u16() {
    need(2);
    uint16_t v = uint16_t(p[0]) | uint16_t(p[1]) << 8;
    p += 2;
    left -= 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
    p += 4;
    left -= 4;
    return v;
  }
  uint8_t u8() {
    need(1);
    uint8_t v = p[0];
    ++p;
    --left;
    return v;
  }
  std::string str(size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(p), n);
    p += n;
    left -= n;
    return s;
  }
};

void write_record(std::string& out, const std::string& name, const Tensor& t) {
  require(name.size() <= 0xffff, ErrorKind::InvalidConfig, "tensor name too long");
  put_u16(out, uint16_t(name.size()));
  out.append(name);
  out.push_back(char(uint8_t(t.ndim())));
  for (int d = 0; d < t.ndim(); ++d) put_u32(out, uint32_t(t.dim(d)));
  for (float v : t.data) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
  }
}

void read_record(Reader& r, const std::string& name, Tensor& t) {
  uint16_t len = r.u16();
  std::string got = r.str(len);
  require(got == name, ErrorKind::MalformedCheckpoint,
          r.path + ": expected record '" + name + "', found '" + got + "'");
  uint8_t ndim = r.u8();
  require(int(ndim) == t.ndim(), ErrorKind::MalformedCheckpoint,
          r.path + ": rank mismatch for '" + name + "'");
  for (int d = 0; d < t.ndim(); ++d)
    require(r.u32() == uint32_t(t.dim(d)), ErrorKind::MalformedCheckpoint,
            r.path + ": shape mismatch for '" + name + "'");
  for (float& v : t.data) {
    uint32_t bits = r.u32();
    std::memcpy(&v, &bits, 4);
  }
}

}  // namespace

void save_checkpoint(Model& model, const std::string& path) {
  auto params = model.params();
  auto buffers = model.buffers();

  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, uint32_t(params.size() + buffers.size()));
  for (auto& p : params) write_record(out, p.name, *p.value);
  for (auto& b : buffers) write_record(out, b.name, *b.value);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), ErrorKind::IoFailure, "cannot open " + path + " for writing");
  f.write(out.data(), std::streamsize(out.size()));
  require(f.good(), ErrorKind::IoFailure, "write failed for " + path);
}

void load_checkpoint(Model& model, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::IoFailure, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  require(bytes.size() >= 12, ErrorKind::MalformedCheckpoint, path + ": file too short");
  require(std::memcmp(bytes.data(), kMagic, 4) == 0, ErrorKind::MalformedCheckpoint,
          path + ": bad magic");
  Reader r{reinterpret_cast<const uint8_t*>(bytes.data()) + 4, bytes.size() - 4, path};
  uint32_t version = r.u32();
  require(version == kVersion, ErrorKind::VersionMismatch,
          path + ": checkpoint version " + std::to_string(version));
  uint32_t count = r.u32();

  auto params = model.params();
  auto buffers = model.buffers();
  require(count == params.size() + buffers.size(), ErrorKind::MalformedCheckpoint,
          path + ": record count does not match model (" + std::to_string(count) + " vs " +
              std::to_string(params.size() + buffers.size()) + ")");
  for (auto& p : params) read_record(r, p.name, *p.value);
  for (auto& b : buffers) read_record(r, b.name, *b.value);
}

}  // namespace lunet::nn
