// Copyright (c) 2026 The LightLane Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lightlane/plotting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "lightlane/image_io.hpp"

namespace lightlane {

namespace {

struct Rgb {
  real r, g, b;
};

constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kGrid{0.85, 0.85, 0.85};
const Rgb kPalette[] = {{0.12, 0.47, 0.71}, {1.0, 0.50, 0.05}, {0.17, 0.63, 0.17},
                        {0.84, 0.15, 0.16}, {0.58, 0.40, 0.74}, {0.55, 0.34, 0.29}};

void put_px(Image& img, int x, int y, const Rgb& c) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  img.at(0, y, x) = c.r * 2 - 1;
  img.at(1, y, x) = c.g * 2 - 1;
  img.at(2, y, x) = c.b * 2 - 1;
}

void draw_line(Image& img, real x0, real y0, real x1, real y1, const Rgb& c) {
  const int steps =
      std::max(1, static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))));
  for (int i = 0; i <= steps; ++i) {
    const real t = static_cast<real>(i) / steps;
    put_px(img, static_cast<int>(std::lround(x0 + (x1 - x0) * t)),
           static_cast<int>(std::lround(y0 + (y1 - y0) * t)), c);
  }
}

void fill_rect(Image& img, int x0, int y0, int x1, int y1, const Rgb& c) {
  for (int y = std::min(y0, y1); y <= std::max(y0, y1); ++y)
    for (int x = std::min(x0, x1); x <= std::max(x0, x1); ++x) put_px(img, x, y, c);
}

// 5x7 uppercase bitmap font; each glyph is 7 rows of 5-bit patterns.
struct Glyph {
  char ch;
  uint8_t rows[7];
};

const Glyph kFont[] = {
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x1B, 0x11}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
    {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'%', {0x18, 0x19, 0x02, 0x04, 0x08, 0x13, 0x03}},
    {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
};

const Glyph* find_glyph(char ch) {
  const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (const auto& g : kFont)
    if (g.ch == up) return &g;
  return nullptr;
}

void draw_text(Image& img, int x, int y, const std::string& text, const Rgb& c) {
  int cx = x;
  for (char ch : text) {
    if (const Glyph* g = find_glyph(ch)) {
      for (int ry = 0; ry < 7; ++ry)
        for (int rx = 0; rx < 5; ++rx)
          if (g->rows[ry] & (1 << (4 - rx))) put_px(img, cx + rx, y + ry, c);
    }
    cx += 6;
  }
}

int text_width(const std::string& text) { return static_cast<int>(text.size()) * 6; }

std::string format_tick(real v) {
  char buf[32];
  if (std::abs(v) >= 1000 || (v != 0 && std::abs(v) < 0.001))
    std::snprintf(buf, sizeof(buf), "%.1e", v);
  else if (v == std::floor(v) && std::abs(v) < 1e9)
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  else
    std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

real nice_step(real range) {
  if (!(range > 0)) return 1;
  const real raw = range / 5;
  const real mag = std::pow(real(10), std::floor(std::log10(raw)));
  const real norm = raw / mag;
  if (norm <= 1) return mag;
  if (norm <= 2) return 2 * mag;
  if (norm <= 5) return 5 * mag;
  return 10 * mag;
}

struct Frame {
  int left, right, top, bottom;  // plot rect in pixels
  real x0, x1, y0, y1;           // data range
  real px(real x) const { return left + (x - x0) / (x1 - x0) * (right - left); }
  real py(real y) const { return bottom - (y - y0) / (y1 - y0) * (bottom - top); }
};

Image blank_canvas(const PlotConfig& cfg) {
  LL_CHECK(cfg.width >= 160 && cfg.height >= 120, "plot canvas too small");
  Image img(3, cfg.height, cfg.width);
  std::fill(img.data.begin(), img.data.end(), real(1));
  return img;
}

void draw_frame_chrome(Image& img, const Frame& f, const PlotConfig& cfg, bool x_ticks) {
  draw_line(img, f.left, f.top, f.left, f.bottom, kBlack);
  draw_line(img, f.left, f.bottom, f.right, f.bottom, kBlack);
  if (!cfg.title.empty())
    draw_text(img, (f.left + f.right) / 2 - text_width(cfg.title) / 2, 6, cfg.title, kBlack);
  if (!cfg.x_label.empty())
    draw_text(img, (f.left + f.right) / 2 - text_width(cfg.x_label) / 2, img.height - 12,
              cfg.x_label, kBlack);
  if (!cfg.y_label.empty()) draw_text(img, 4, 6, cfg.y_label, kBlack);

  const real ys = nice_step(f.y1 - f.y0);
  for (real v = std::ceil(f.y0 / ys) * ys; v <= f.y1 + ys * 1e-9; v += ys) {
    const int y = static_cast<int>(std::lround(f.py(v)));
    draw_line(img, f.left + 1, y, f.right, y, kGrid);
    draw_line(img, f.left - 3, y, f.left, y, kBlack);
    const std::string s = format_tick(v);
    draw_text(img, f.left - 6 - text_width(s), y - 3, s, kBlack);
  }
  if (x_ticks) {
    const real xs = nice_step(f.x1 - f.x0);
    for (real v = std::ceil(f.x0 / xs) * xs; v <= f.x1 + xs * 1e-9; v += xs) {
      const int x = static_cast<int>(std::lround(f.px(v)));
      draw_line(img, x, f.bottom, x, f.bottom + 3, kBlack);
      const std::string s = format_tick(v);
      draw_text(img, x - text_width(s) / 2, f.bottom + 6, s, kBlack);
    }
  }
}

}  // namespace

void plot_series(const std::vector<Series>& series, const PlotConfig& cfg,
                 const std::string& out_path) {
  LL_CHECK(!series.empty(), "plot_series: no series");
  Image img = blank_canvas(cfg);
  Frame f{64, cfg.width - 16, 24, cfg.height - 36, 0, 1, 0, 1};

  bool any = false;
  real x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!any) {
        x0 = x1 = x;
        y0 = y1 = y;
        any = true;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  LL_CHECK(any, "plot_series: all series empty");
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  const real pad = (y1 - y0 < 1e-12) ? std::max<real>(1e-3, std::abs(y0) * 0.1 + 1e-3)
                                     : (y1 - y0) * 0.08;
  f.x0 = x0;
  f.x1 = x1;
  f.y0 = y0 - pad;
  f.y1 = y1 + pad;

  draw_frame_chrome(img, f, cfg, true);

  for (size_t si = 0; si < series.size(); ++si) {
    const Rgb c = kPalette[si % std::size(kPalette)];
    const auto& pts = series[si].points;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      draw_line(img, f.px(pts[i].first), f.py(pts[i].second), f.px(pts[i + 1].first),
                f.py(pts[i + 1].second), c);
    for (const auto& [x, y] : pts)
      fill_rect(img, static_cast<int>(f.px(x)) - 1, static_cast<int>(f.py(y)) - 1,
                static_cast<int>(f.px(x)) + 1, static_cast<int>(f.py(y)) + 1, c);
    const int ly = f.top + 4 + static_cast<int>(si) * 10;
    draw_line(img, f.right - 70, ly + 3, f.right - 58, ly + 3, c);
    draw_text(img, f.right - 54, ly, series[si].name, kBlack);
  }
  save_image_rgb(out_path, img);
}

void plot_bars(const std::vector<std::pair<std::string, real>>& bars, const PlotConfig& cfg,
               const std::string& out_path) {
  LL_CHECK(!bars.empty(), "plot_bars: no bars");
  Image img = blank_canvas(cfg);
  Frame f{64, cfg.width - 16, 24, cfg.height - 36, 0, 1, 0, 1};

  real y1 = 0;
  for (const auto& [name, v] : bars) {
    LL_CHECK(v >= 0, "plot_bars: negative value for " + name);
    y1 = std::max(y1, v);
  }
  f.y0 = 0;
  f.y1 = y1 > 0 ? y1 * 1.15 : 1;
  f.x0 = 0;
  f.x1 = static_cast<real>(bars.size());

  draw_frame_chrome(img, f, cfg, false);

  const real slot = static_cast<real>(f.right - f.left) / static_cast<real>(bars.size());
  for (size_t i = 0; i < bars.size(); ++i) {
    const Rgb c = kPalette[i % std::size(kPalette)];
    const int bx0 = f.left + static_cast<int>(slot * (static_cast<real>(i) + 0.2));
    const int bx1 = f.left + static_cast<int>(slot * (static_cast<real>(i) + 0.8));
    const int by = static_cast<int>(std::lround(f.py(bars[i].second)));
    fill_rect(img, bx0, by, bx1, f.bottom - 1, c);
    const std::string value = format_tick(bars[i].second);
    draw_text(img, (bx0 + bx1) / 2 - text_width(value) / 2, by - 10, value, kBlack);
    draw_text(img, (bx0 + bx1) / 2 - text_width(bars[i].first) / 2, f.bottom + 6, bars[i].first,
              kBlack);
  }
  save_image_rgb(out_path, img);
}

}  // namespace lightlane
