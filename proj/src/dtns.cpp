#include "tomo/dtns.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace tomo {

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(p[i]) << (8 * i));
    return value;
}

std::uint64_t product(const std::vector<std::uint64_t>& dims) {
    std::uint64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

}  // namespace

std::uint64_t Tensor::element_count() const { return product(dims); }

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
    if (t.dims.size() > 255) throw std::invalid_argument("DTNS: too many dimensions");
    const std::size_t stored = std::visit([](const auto& v) { return v.size(); }, t.data);
    if (stored != t.element_count()) throw std::invalid_argument("DTNS: element count does not match dims");

    std::vector<std::uint8_t> out{'D', 'T', 'N', 'S'};
    put_le<std::uint16_t>(out, kDtnsVersion);
    out.push_back(static_cast<std::uint8_t>(t.dtype()));
    out.push_back(static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) put_le<std::uint64_t>(out, d);
    if (t.dtype() == DType::Float64) {
        out.reserve(out.size() + 8 * stored);
        for (double v : t.f64()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    } else {
        out.reserve(out.size() + 4 * stored);
        for (std::uint32_t v : t.u32()) put_le<std::uint32_t>(out, v);
    }
    return out;
}

Tensor decode_tensor(const std::vector<std::uint8_t>& bytes) {
    using Field = FormatError::Field;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "DTNS", 4) != 0) {
        throw FormatError(Field::Magic, "DTNS: bad magic");
    }
    if (bytes.size() < 8) throw FormatError(Field::Header, "DTNS: truncated header");
    const auto version = get_le<std::uint16_t>(bytes.data() + 4);
    if (version != kDtnsVersion) {
        throw FormatError(Field::Version, "DTNS: unsupported version " + std::to_string(version));
    }
    const std::uint8_t dtype = bytes[6];
    if (dtype != static_cast<std::uint8_t>(DType::Float64) && dtype != static_cast<std::uint8_t>(DType::UInt32)) {
        throw FormatError(Field::DType, "DTNS: unsupported dtype code " + std::to_string(dtype));
    }
    const std::size_t ndim = bytes[7];
    const std::size_t header = 8 + 8 * ndim;
    if (bytes.size() < header) throw FormatError(Field::Header, "DTNS: truncated dims");

    Tensor t;
    for (std::size_t i = 0; i < ndim; ++i) t.dims.push_back(get_le<std::uint64_t>(bytes.data() + 8 + 8 * i));
    const std::size_t elem = dtype == 1 ? 8 : 4;
    const std::uint64_t count = product(t.dims);
    const std::size_t payload = bytes.size() - header;
    if (count > payload / elem || payload != count * elem) {
        throw FormatError(Field::Payload, payload < count * elem ? "DTNS: truncated payload"
                                                                  : "DTNS: payload longer than dims imply");
    }
    const std::uint8_t* p = bytes.data() + header;
    if (dtype == 1) {
        std::vector<double> v(count);
        for (std::uint64_t i = 0; i < count; ++i) v[i] = std::bit_cast<double>(get_le<std::uint64_t>(p + 8 * i));
        t.data = std::move(v);
    } else {
        std::vector<std::uint32_t> v(count);
        for (std::uint64_t i = 0; i < count; ++i) v[i] = get_le<std::uint32_t>(p + 4 * i);
        t.data = std::move(v);
    }
    return t;
}

void write_tensor(const Tensor& t, const std::filesystem::path& path) {
    const auto bytes = encode_tensor(t);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_tensor(bytes);
    } catch (const FormatError& e) {
        throw FormatError(e.field(), std::string(e.what()) + " in " + path.string());
    }
}

Tensor to_tensor(const ImageGrid& image) {
    const auto n = static_cast<std::uint64_t>(image.side_px());
    const auto& v = image.values();
    return Tensor{{n, n}, std::vector<double>(v.data(), v.data() + v.size())};
}

Tensor to_tensor(const std::vector<ImageGrid>& images) {
    if (images.empty()) throw std::invalid_argument("to_tensor: empty image stack");
    const int side = images.front().side_px();
    std::vector<double> data;
    data.reserve(images.size() * images.front().size());
    for (const auto& im : images) {
        if (im.side_px() != side) throw std::invalid_argument("to_tensor: images differ in size");
        data.insert(data.end(), im.values().data(), im.values().data() + im.values().size());
    }
    const auto n = static_cast<std::uint64_t>(side);
    return Tensor{{images.size(), n, n}, std::move(data)};
}

Tensor to_tensor(const CountMatrix& counts) {
    return Tensor{{static_cast<std::uint64_t>(counts.rows()), static_cast<std::uint64_t>(counts.cols())},
                  std::vector<std::uint32_t>(counts.data(), counts.data() + counts.size())};
}

Tensor to_tensor(const std::vector<CountMatrix>& counts) {
    if (counts.empty()) throw std::invalid_argument("to_tensor: empty count stack");
    std::vector<std::uint32_t> data;
    for (const auto& c : counts) {
        if (c.rows() != counts.front().rows() || c.cols() != counts.front().cols()) {
            throw std::invalid_argument("to_tensor: count matrices differ in shape");
        }
        data.insert(data.end(), c.data(), c.data() + c.size());
    }
    return Tensor{{counts.size(), static_cast<std::uint64_t>(counts.front().rows()),
                   static_cast<std::uint64_t>(counts.front().cols())},
                  std::move(data)};
}

ImageGrid image_from_tensor(const Tensor& t, double pixel_size, std::size_t index) {
    if (t.dtype() != DType::Float64) throw std::invalid_argument("image tensor must be float64");
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
    std::uint64_t slices = 1;
    if (t.dims.size() == 2) {
        rows = t.dims[0];
        cols = t.dims[1];
    } else if (t.dims.size() == 3) {
        slices = t.dims[0];
        rows = t.dims[1];
        cols = t.dims[2];
    } else {
        throw std::invalid_argument("image tensor must be 2D or 3D");
    }
    if (rows != cols) throw std::invalid_argument("image tensor must be square");
    if (index >= slices) throw std::invalid_argument("image tensor slice index out of range");
    const auto n = static_cast<Eigen::Index>(rows);
    const double* base = t.f64().data() + index * rows * cols;
    return ImageGrid(Eigen::Map<const RowMatrix<double>>(base, n, n), pixel_size);
}

CountMatrix counts_from_tensor(const Tensor& t) {
    if (t.dtype() != DType::UInt32 || t.dims.size() != 2) {
        throw std::invalid_argument("count tensor must be a 2D uint32 tensor");
    }
    return Eigen::Map<const CountMatrix>(t.u32().data(), static_cast<Eigen::Index>(t.dims[0]),
                                         static_cast<Eigen::Index>(t.dims[1]));
}

}  // namespace tomo
