#include "inkgrain/labels.hpp"

#include <algorithm>

#include "inkgrain/error.hpp"

namespace inkgrain {

std::string_view label_key(Label l) noexcept {
    switch (l) {
        case Label::PC: return "pc";
        case Label::PM: return "pm";
        case Label::O: return "o";
        case Label::W: return "w";
    }
    return "?";
}

std::optional<Label> label_from_key(std::string_view key) noexcept {
    for (Label l : kAllLabels)
        if (label_key(l) == key) return l;
    return std::nullopt;
}

std::uint8_t label_code(Label l) noexcept {
    switch (l) {
        case Label::PC: return 85;
        case Label::PM: return 170;
        case Label::O: return 0;
        case Label::W: return 255;
    }
    return 255;
}

std::optional<Label> label_from_code(std::uint8_t code) noexcept {
    for (Label l : kAllLabels)
        if (label_code(l) == code) return l;
    return std::nullopt;
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw ParameterError("mask dimensions must be positive");
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    if (width <= 0 || height <= 0) throw ParameterError("mask dimensions must be positive");
    if (bits_.size() != static_cast<std::size_t>(width) * height)
        throw ParameterError("mask bit count does not match width x height");
    for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

LabelMap::LabelMap(int width, int height, Label fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw ParameterError("label map dimensions must be positive");
    labels_.assign(static_cast<std::size_t>(width) * height, fill);
}

LabelMap::LabelMap(int width, int height, std::vector<Label> labels)
    : width_(width), height_(height), labels_(std::move(labels)) {
    if (width <= 0 || height <= 0) throw ParameterError("label map dimensions must be positive");
    if (labels_.size() != static_cast<std::size_t>(width) * height)
        throw ParameterError("label count does not match width x height");
}

std::array<std::size_t, 4> LabelMap::counts() const noexcept {
    std::array<std::size_t, 4> c{};
    for (Label l : labels_) ++c[index_of(l)];
    return c;
}

BinaryMask LabelMap::indicator(Label l) const {
    BinaryMask m(width_, height_);
    for (std::size_t i = 0; i < labels_.size(); ++i) m.set(i, labels_[i] == l);
    return m;
}

BinaryMask LabelMap::cyan_mask() const {
    BinaryMask m(width_, height_);
    for (std::size_t i = 0; i < labels_.size(); ++i)
        m.set(i, labels_[i] == Label::PC || labels_[i] == Label::O);
    return m;
}

BinaryMask LabelMap::magenta_mask() const {
    BinaryMask m(width_, height_);
    for (std::size_t i = 0; i < labels_.size(); ++i)
        m.set(i, labels_[i] == Label::PM || labels_[i] == Label::O);
    return m;
}

}  // namespace inkgrain
