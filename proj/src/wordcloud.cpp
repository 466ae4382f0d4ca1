#include "drivesent/wordcloud.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace drivesent {
namespace {

constexpr std::array<const char*, 6> kPalette{"#1f4e79", "#2e7d32", "#b35900",
                                              "#6a1b9a", "#00838f", "#9e2a2b"};

std::string fixed1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::size_t code_points(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

struct Placed {
  std::string text;
  double font;
  double x;
  double width;
  std::size_t rank;
};

}  // namespace

std::string render_word_cloud(std::vector<CloudWord> words, const CloudStyle& style) {
  std::stable_sort(words.begin(), words.end(), [](const CloudWord& a, const CloudWord& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.text < b.text;
  });
  double lo = 0, hi = 0;
  if (!words.empty()) {
    hi = words.front().weight;
    lo = words.back().weight;
  }
  auto font_for = [&](double w) {
    if (hi == lo) return style.max_font;
    return style.min_font + (w - lo) / (hi - lo) * (style.max_font - style.min_font);
  };

  std::string body;
  const double usable = style.width - 2 * style.margin;
  double top = style.margin + (style.title.empty() ? 0 : 28);
  std::vector<Placed> row;
  double row_font = 0, cursor = 0;

  auto flush = [&]() -> bool {
    if (row.empty()) return true;
    const double baseline = top + row_font;
    if (baseline > style.height - style.margin) return false;
    const double offset = style.margin + (usable - (cursor - style.gap)) / 2;
    for (const auto& p : row) {
      body += "  <text x=\"" + fixed1(offset + p.x) + "\" y=\"" + fixed1(baseline) +
              "\" font-size=\"" + fixed1(p.font) + "\" fill=\"" +
              kPalette[p.rank % kPalette.size()] + "\">" + xml_escape(p.text) + "</text>\n";
    }
    top += row_font * style.line_height;
    row.clear();
    row_font = 0;
    cursor = 0;
    return true;
  };

  bool full = false;
  for (std::size_t i = 0; i < words.size() && !full; ++i) {
    const double font = font_for(words[i].weight);
    const double width = font * style.char_width * static_cast<double>(code_points(words[i].text));
    if (width > usable) continue;
    if (cursor + width > usable) full = !flush();
    if (full) break;
    row.push_back({words[i].text, font, cursor, width, i});
    cursor += width + style.gap;
    row_font = std::max(row_font, font);
  }
  if (!full) flush();

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
         "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " +
         std::to_string(style.width) + " " + std::to_string(style.height) + "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "  <g font-family=\"Helvetica, Arial, sans-serif\" text-anchor=\"start\">\n";
  if (!style.title.empty()) {
    svg += "  <text x=\"" + fixed1(style.margin) + "\" y=\"" + fixed1(style.margin + 14) +
           "\" font-size=\"16\" fill=\"#444444\">" + xml_escape(style.title) + "</text>\n";
  }
  svg += body;
  svg += "  </g>\n</svg>\n";
  return svg;
}

}  // namespace drivesent
