#pragma once

#include <string>
#include <vector>

namespace drivesent {

struct CloudWord {
  std::string text;
  double weight = 0;
};

struct CloudStyle {
  int width = 800;
  int height = 500;
  double min_font = 12;
  double max_font = 56;
  double margin = 16;
  double gap = 14;           // horizontal space between words
  double char_width = 0.6;   // advance per code point, as a fraction of font size
  double line_height = 1.25;
  std::string title;
};

// Deterministic row-packed word cloud: words by weight descending (ties by
// text), font size linear in weight, placed left to right and wrapped into
// rows. Words that no longer fit vertically are dropped.
std::string render_word_cloud(std::vector<CloudWord> words, const CloudStyle& style = {});

}  // namespace drivesent
