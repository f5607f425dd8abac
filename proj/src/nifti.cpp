#include "edgeseg/nifti.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "edgeseg/errors.hpp"
#include "edgeseg/fileio.hpp"

namespace edgeseg {

namespace {

// Byte offsets inside the 348-byte header.
constexpr std::size_t kOffSizeofHdr = 0;
constexpr std::size_t kOffDim = 40;
constexpr std::size_t kOffDatatype = 70;
constexpr std::size_t kOffBitpix = 72;
constexpr std::size_t kOffPixdim = 76;
constexpr std::size_t kOffVoxOffset = 108;
constexpr std::size_t kOffSclSlope = 112;
constexpr std::size_t kOffSclInter = 116;
constexpr std::size_t kOffXyztUnits = 123;
constexpr std::size_t kOffMagic = 344;

template <typename T>
T byteswap_value(T v) {
  std::array<unsigned char, sizeof(T)> b;
  std::memcpy(b.data(), &v, sizeof(T));
  std::reverse(b.begin(), b.end());
  std::memcpy(&v, b.data(), sizeof(T));
  return v;
}

class Reader {
 public:
  Reader(std::string_view bytes, bool swap) : bytes_(bytes), swap_(swap) {}

  template <typename T>
  T get(std::size_t off) const {
    if (off + sizeof(T) > bytes_.size()) throw IoError("truncated NIfTI file");
    T v;
    std::memcpy(&v, bytes_.data() + off, sizeof(T));
    return swap_ ? byteswap_value(v) : v;
  }

 private:
  std::string_view bytes_;
  bool swap_;
};

template <typename T>
void put(std::string& buf, std::size_t off, T v) {
  if constexpr (std::endian::native == std::endian::big) v = byteswap_value(v);
  std::memcpy(buf.data() + off, &v, sizeof(T));
}

int bytes_per_voxel(NiftiType t) {
  switch (t) {
    case NiftiType::UInt8: return 1;
    case NiftiType::Int16: return 2;
    case NiftiType::Float32: return 4;
  }
  return 0;
}

NiftiType checked_type(std::int16_t code) {
  if (code == 2 || code == 4 || code == 16) return static_cast<NiftiType>(code);
  throw FormatError("unsupported datatype " + std::to_string(code));
}

}  // namespace

NiftiImage decode_nifti(std::string_view bytes) {
  if (bytes.size() < static_cast<std::size_t>(kNiftiHeaderSize)) throw IoError("truncated NIfTI header");

  // dim[0] must lie in [1, 7]; otherwise the file was written on the other endianness.
  const auto raw_dim0 = Reader(bytes, false).get<std::int16_t>(kOffDim);
  const bool swap = raw_dim0 < 1 || raw_dim0 > 7;
  const Reader r(bytes, swap);

  if (r.get<std::int32_t>(kOffSizeofHdr) != kNiftiHeaderSize) throw FormatError("sizeof_hdr is not 348");
  if (std::memcmp(bytes.data() + kOffMagic, "n+1\0", 4) != 0) throw FormatError("bad magic: only single-file n+1 NIfTI-1 is supported");

  const int ndim = r.get<std::int16_t>(kOffDim);
  if (ndim != 3 && ndim != 4) throw FormatError("dim[0] must be 3 or 4, got " + std::to_string(ndim));

  NiftiImage img;
  for (int i = 0; i < 4; ++i) {
    img.dim[i] = i < ndim ? r.get<std::int16_t>(kOffDim + 2 * (i + 1)) : 1;
    if (img.dim[i] < 1) throw FormatError("non-positive dimension in header");
  }
  img.datatype = checked_type(r.get<std::int16_t>(kOffDatatype));
  img.spacing = {r.get<float>(kOffPixdim + 4), r.get<float>(kOffPixdim + 8), r.get<float>(kOffPixdim + 12)};
  for (double s : {img.spacing.sx, img.spacing.sy, img.spacing.sz})
    if (!(s > 0.0) || !std::isfinite(s)) throw FormatError("pixdim must be positive");

  const float vox_offset = r.get<float>(kOffVoxOffset);
  if (!(vox_offset >= kNiftiVoxOffset)) throw FormatError("vox_offset must be at least 352");
  const auto offset = static_cast<std::size_t>(vox_offset);

  const float slope = r.get<float>(kOffSclSlope);
  const float inter = r.get<float>(kOffSclInter);
  const bool scaled = slope != 0.0f && std::isfinite(slope) && std::isfinite(inter) && !(slope == 1.0f && inter == 0.0f);

  const std::size_t count = static_cast<std::size_t>(img.dim[0]) * img.dim[1] * img.dim[2] * img.dim[3];
  const int bpv = bytes_per_voxel(img.datatype);
  if (offset + count * bpv > bytes.size()) throw IoError("truncated NIfTI payload");

  img.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = offset + i * bpv;
    double v = 0.0;
    switch (img.datatype) {
      case NiftiType::UInt8: v = static_cast<unsigned char>(bytes[at]); break;
      case NiftiType::Int16: v = r.get<std::int16_t>(at); break;
      case NiftiType::Float32: v = r.get<float>(at); break;
    }
    img.values[i] = scaled ? v * slope + inter : v;
  }
  return img;
}

std::string encode_nifti(const NiftiImage& img) {
  const std::size_t count = static_cast<std::size_t>(img.dim[0]) * img.dim[1] * img.dim[2] * img.dim[3];
  if (img.values.size() != count) throw UsageError("encode_nifti: value count does not match dims");
  for (int d : img.dim)
    if (d < 1 || d > 32767) throw UsageError("encode_nifti: dimension out of int16 range");

  const int bpv = bytes_per_voxel(img.datatype);
  std::string buf(kNiftiVoxOffset + count * bpv, '\0');
  const std::int16_t ndim = img.dim[3] > 1 ? 4 : 3;

  put<std::int32_t>(buf, kOffSizeofHdr, kNiftiHeaderSize);
  put<std::int16_t>(buf, kOffDim, ndim);
  for (int i = 0; i < 7; ++i) put<std::int16_t>(buf, kOffDim + 2 * (i + 1), static_cast<std::int16_t>(i < 4 ? img.dim[i] : 1));
  put<std::int16_t>(buf, kOffDatatype, static_cast<std::int16_t>(img.datatype));
  put<std::int16_t>(buf, kOffBitpix, static_cast<std::int16_t>(8 * bpv));
  const std::array<float, 8> pixdim = {1.0f, static_cast<float>(img.spacing.sx), static_cast<float>(img.spacing.sy),
                                       static_cast<float>(img.spacing.sz), 1.0f, 1.0f, 1.0f, 1.0f};
  for (int i = 0; i < 8; ++i) put<float>(buf, kOffPixdim + 4 * i, pixdim[i]);
  put<float>(buf, kOffVoxOffset, static_cast<float>(kNiftiVoxOffset));
  put<float>(buf, kOffSclSlope, 0.0f);
  put<float>(buf, kOffSclInter, 0.0f);
  buf[kOffXyztUnits] = 2;  // mm
  std::memcpy(buf.data() + kOffMagic, "n+1\0", 4);

  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = kNiftiVoxOffset + i * bpv;
    switch (img.datatype) {
      case NiftiType::UInt8: buf[at] = static_cast<char>(static_cast<unsigned char>(img.values[i])); break;
      case NiftiType::Int16: put<std::int16_t>(buf, at, static_cast<std::int16_t>(img.values[i])); break;
      case NiftiType::Float32: put<float>(buf, at, static_cast<float>(img.values[i])); break;
    }
  }
  return buf;
}

NiftiImage read_nifti(const std::filesystem::path& path) {
  try {
    return decode_nifti(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_nifti(const NiftiImage& image, const std::filesystem::path& path) {
  write_file_atomic(path, encode_nifti(image));
}

Volume read_volume(const std::filesystem::path& path) {
  const NiftiImage img = read_nifti(path);
  if (img.dim[3] != 1) throw FormatError(path.string() + ": expected a 3D volume");
  Volume vol(img.dims3(), img.spacing);
  for (std::size_t i = 0; i < img.values.size(); ++i) {
    const auto v = static_cast<float>(img.values[i]);
    if (!std::isfinite(v)) throw FormatError(path.string() + ": non-finite intensity");
    vol[i] = v;
  }
  return vol;
}

LabelVolume read_labels(const std::filesystem::path& path) {
  const NiftiImage img = read_nifti(path);
  if (img.dim[3] != 1) throw FormatError(path.string() + ": expected a 3D label volume");
  LabelVolume labels(img.dims3(), img.spacing);
  for (std::size_t i = 0; i < img.values.size(); ++i) {
    const double v = img.values[i];
    if (v != std::floor(v) || !is_brats_label(v < 0 ? 99u : static_cast<unsigned>(v)))
      throw FormatError(path.string() + ": label value " + std::to_string(v) + " outside {0,1,2,4}");
    labels[i] = static_cast<std::uint8_t>(v);
  }
  return labels;
}

OneHotStack read_onehot(const std::filesystem::path& path) {
  const NiftiImage img = read_nifti(path);
  const int channels = img.dim[3];
  if (img.datatype != NiftiType::UInt8) throw FormatError(path.string() + ": one-hot stacks are uint8");
  if (channels != kRegionChannels && channels != kEdgeChannels)
    throw FormatError(path.string() + ": one-hot stack must have 4 or 7 channels");
  OneHotStack stack;
  stack.dims = img.dims3();
  stack.spacing = img.spacing;
  const auto n = static_cast<Eigen::Index>(stack.dims.count());
  stack.data.resize(channels, n);
  for (int c = 0; c < channels; ++c)
    for (Eigen::Index v = 0; v < n; ++v) stack.data(c, v) = static_cast<std::uint8_t>(img.values[c * n + v]);
  stack.channel_names = channels == kRegionChannels ? region_channel_names() : edge_channel_names();
  return stack;
}

void write_nifti(const Volume& vol, const std::filesystem::path& path) {
  NiftiImage img{{vol.dims.nx, vol.dims.ny, vol.dims.nz, 1}, vol.spacing, NiftiType::Float32, {}};
  img.values.assign(vol.data.begin(), vol.data.end());
  write_nifti(img, path);
}

void write_nifti(const Grid<std::uint8_t>& labels, const std::filesystem::path& path) {
  NiftiImage img{{labels.dims.nx, labels.dims.ny, labels.dims.nz, 1}, labels.spacing, NiftiType::UInt8, {}};
  img.values.assign(labels.data.begin(), labels.data.end());
  write_nifti(img, path);
}

void write_nifti(const OneHotStack& stack, const std::filesystem::path& path) {
  const Eigen::Index n = stack.data.cols();
  NiftiImage img{{stack.dims.nx, stack.dims.ny, stack.dims.nz, stack.channels()}, stack.spacing, NiftiType::UInt8, {}};
  img.values.resize(static_cast<std::size_t>(n) * stack.channels());
  for (int c = 0; c < stack.channels(); ++c)
    for (Eigen::Index v = 0; v < n; ++v) img.values[c * n + v] = stack.data(c, v);
  write_nifti(img, path);
}

}  // namespace edgeseg
