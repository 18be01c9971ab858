#pragma once

#include "tomo/image.hpp"
#include "tomo/photon_noise.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tomo {

// DTNS layout (all little-endian):
//   "DTNS" | u16 version (=1) | u8 dtype | u8 ndim | ndim x u64 dims | payload
// dtype 1 = binary64, 2 = u32. Payload is row-major.

enum class DType : std::uint8_t { Float64 = 1, UInt32 = 2 };

inline constexpr std::uint16_t kDtnsVersion = 1;

struct Tensor {
    std::vector<std::uint64_t> dims;
    std::variant<std::vector<double>, std::vector<std::uint32_t>> data;

    DType dtype() const { return data.index() == 0 ? DType::Float64 : DType::UInt32; }
    std::uint64_t element_count() const;

    const std::vector<double>& f64() const { return std::get<std::vector<double>>(data); }
    const std::vector<std::uint32_t>& u32() const { return std::get<std::vector<std::uint32_t>>(data); }

    friend bool operator==(const Tensor&, const Tensor&) = default;
};

class FormatError : public std::runtime_error {
public:
    enum class Field { Magic, Version, DType, Header, Payload };

    FormatError(Field field, const std::string& what) : std::runtime_error(what), field_(field) {}
    Field field() const { return field_; }

private:
    Field field_;
};

/// File-system failure; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode_tensor(const Tensor& t);
Tensor decode_tensor(const std::vector<std::uint8_t>& bytes);

void write_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor read_tensor(const std::filesystem::path& path);

Tensor to_tensor(const ImageGrid& image);
/// Stacks equally sized images into an (n, side, side) tensor.
Tensor to_tensor(const std::vector<ImageGrid>& images);
Tensor to_tensor(const CountMatrix& counts);
Tensor to_tensor(const std::vector<CountMatrix>& counts);

/// Accepts (side, side) or (1, side, side) float tensors, or picks one
/// slice of an (n, side, side) stack.
ImageGrid image_from_tensor(const Tensor& t, double pixel_size = 1.0, std::size_t index = 0);
CountMatrix counts_from_tensor(const Tensor& t);

}  // namespace tomo
