#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace inkgrain {

/// The four ink components: pure cyan, pure magenta, overlap, white (no ink).
enum class Label : std::uint8_t { PC = 0, PM = 1, O = 2, W = 3 };

inline constexpr std::array<Label, 4> kAllLabels{Label::PC, Label::PM, Label::O, Label::W};

constexpr std::size_t index_of(Label l) noexcept { return static_cast<std::size_t>(l); }

/// Lower-case key used in files and reports: pc, pm, o, w.
std::string_view label_key(Label l) noexcept;
std::optional<Label> label_from_key(std::string_view key) noexcept;

/// Gray code in label PNGs. Ink renders dark: O=0, PC=85, PM=170, W=255.
std::uint8_t label_code(Label l) noexcept;
std::optional<Label> label_from_code(std::uint8_t code) noexcept;

/// One bit per pixel; 1 means the ink is present, pure or overlapped.
class BinaryMask {
public:
    BinaryMask(int width, int height, bool fill = false);
    BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }

    bool get(std::size_t i) const noexcept { return bits_[i] != 0; }
    bool get(int x, int y) const noexcept { return get(static_cast<std::size_t>(y) * width_ + x); }
    void set(std::size_t i, bool v) noexcept { bits_[i] = v ? 1 : 0; }
    void set(int x, int y, bool v) noexcept { set(static_cast<std::size_t>(y) * width_ + x, v); }

    std::size_t count() const noexcept;
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    bool same_shape(const BinaryMask& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_;
    }
    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
};

/// Per-pixel partition into the four components.
class LabelMap {
public:
    LabelMap(int width, int height, Label fill = Label::W);
    LabelMap(int width, int height, std::vector<Label> labels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return labels_.size(); }

    Label get(std::size_t i) const noexcept { return labels_[i]; }
    Label get(int x, int y) const noexcept { return get(static_cast<std::size_t>(y) * width_ + x); }
    void set(std::size_t i, Label l) noexcept { labels_[i] = l; }
    void set(int x, int y, Label l) noexcept { set(static_cast<std::size_t>(y) * width_ + x, l); }

    std::span<const Label> labels() const noexcept { return labels_; }

    std::array<std::size_t, 4> counts() const noexcept;
    std::size_t count(Label l) const noexcept { return counts()[index_of(l)]; }

    /// Mask of pixels carrying exactly label `l`.
    BinaryMask indicator(Label l) const;
    /// Cyan ink present: PC or O.
    BinaryMask cyan_mask() const;
    /// Magenta ink present: PM or O.
    BinaryMask magenta_mask() const;

    bool same_shape(const LabelMap& o) const noexcept {
        return width_ == o.width_ && height_ == o.height_;
    }
    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    int width_;
    int height_;
    std::vector<Label> labels_;
};

}  // namespace inkgrain
