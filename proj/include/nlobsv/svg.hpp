#pragma once

// Minimal self-contained SVG plots: polylines, scatter markers, axes, legend.

#include <string>
#include <vector>

namespace nlobsv {

class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_line(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, const std::string& label = "");
  void add_scatter(const std::vector<double>& xs, const std::vector<double>& ys,
                   const std::string& color, double radius = 1.5,
                   const std::string& label = "");
  void write(const std::string& path) const;

 private:
  struct Series {
    std::vector<double> xs, ys;
    std::string color;
    std::string label;
    bool scatter = false;
    double radius = 1.5;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace nlobsv
