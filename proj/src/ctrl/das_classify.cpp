#include "optctl/ctrl/das_classify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace optctl::ctrl {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    return v[mid];
}

}  // namespace

json DasVerdict::to_json() const {
    return json{{"label", to_string(label)},
                {"features",
                 {{"vertical_persistence", features.vertical_persistence},
                  {"persistent_columns", features.persistent_columns},
                  {"horizontal_line_count", features.horizontal_line_count},
                  {"brightness_ratio", features.brightness_ratio}}},
                {"rationale", rationale}};
}

DasVerdict classify_waterfall(const sim::Waterfall& w) {
    w.validate();

    // Robust noise statistics: hot rows and streaks must not drag the
    // thresholds, so use median / MAD instead of mean / stddev.
    std::vector<double> cells(w.intensity);
    const double floor = median(cells);
    std::vector<double> dev(cells.size());
    for (size_t i = 0; i < cells.size(); ++i) dev[i] = std::abs(cells[i] - floor);
    const double sigma = 1.4826 * median(dev);
    const double cell_hot = floor + 4.0 * sigma;
    const double row_hot = floor + 6.0 * sigma;

    DasFeatures f;

    // Horizontal lines: full-width rows whose mean rises at least 6 sigma.
    for (int r = 0; r < w.rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < w.cols; ++c) sum += w.at(r, c);
        if (sum / w.cols >= row_hot) f.horizontal_line_count++;
    }

    // Vertical streaks: per column, the hot fraction of rows after the first
    // hot row. Short suffixes (under a quarter of the record) do not count as
    // persistent.
    int best_column = -1;
    int best_onset = 0;
    for (int c = 0; c < w.cols; ++c) {
        int onset = -1;
        int hot = 0;
        for (int r = 0; r < w.rows; ++r) {
            if (w.at(r, c) >= cell_hot) {
                if (onset < 0) onset = r;
                hot++;
            }
        }
        if (onset < 0) continue;
        const int span = w.rows - onset;
        if (span < w.rows / 4) continue;
        const double persistence = static_cast<double>(hot) / span;
        if (persistence >= 0.5) {
            f.persistent_columns++;
            if (persistence > f.vertical_persistence) {
                f.vertical_persistence = persistence;
                best_column = c;
                best_onset = onset;
            }
        } else {
            f.vertical_persistence = std::max(f.vertical_persistence, persistence);
        }
    }

    // Brightness mismatch: compare the region beyond the brightest streak
    // before and after its onset. No streak means no mismatch.
    f.brightness_ratio = 1.0;
    if (best_column >= 0) {
        const int margin = best_column + f.persistent_columns + 1;
        if (margin < w.cols && best_onset > 0) {
            double pre = 0.0, post = 0.0;
            long pre_n = 0, post_n = 0;
            for (int r = 0; r < w.rows; ++r) {
                for (int c = margin; c < w.cols; ++c) {
                    if (r < best_onset) {
                        pre += w.at(r, c);
                        pre_n++;
                    } else {
                        post += w.at(r, c);
                        post_n++;
                    }
                }
            }
            if (pre_n > 0 && post_n > 0 && pre > 0.0) {
                f.brightness_ratio = (post / post_n) / (pre / pre_n);
            }
        }
    }

    DasVerdict v;
    v.features = f;
    if ((f.persistent_columns >= 3 && f.vertical_persistence >= 0.5) ||
        f.brightness_ratio <= 0.5) {
        v.label = sim::DasScenario::cut;
        v.rationale = f.persistent_columns >= 3
                          ? std::to_string(f.persistent_columns) +
                                " persistent vertical streaks after onset"
                          : "brightness beyond the streak dropped to " +
                                std::to_string(f.brightness_ratio) + "x after onset";
    } else if (f.horizontal_line_count >= 2) {
        v.label = sim::DasScenario::agitation;
        v.rationale = std::to_string(f.horizontal_line_count) +
                      " full-width bright rows without persistent vertical streaks";
    } else {
        v.label = sim::DasScenario::stable;
        v.rationale = "no persistent streaks and no bright rows above the noise floor";
    }
    return v;
}

std::string build_das_prompt(bool with_rules, const std::string& metadata) {
    std::string prompt;
    if (with_rules) {
        prompt +=
            "A fiber cut event can occur under two conditions: (1) fiber agitation, which "
            "appears as horizontal lines in the waterfall plot even when they are not dominant; "
            "this agitation is often accompanied by multiple vertical lines, indicating a "
            "potential fiber cut event; and (2) a mismatch in brightness between the vertical "
            "lines at the top and bottom of the plot, which may also suggest a fiber cut. ";
    }
    if (!metadata.empty()) {
        prompt += "Waterfall metadata: " + metadata + ". ";
    }
    prompt += with_rules
                  ? "Based on these criteria, does this waterfall plot indicate a fiber cut event?"
                  : "Does this waterfall plot indicate a fiber cut event?";
    return prompt;
}

}  // namespace optctl::ctrl
