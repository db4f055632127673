#include "htn/families.h"

#include "htn/error.h"

#include <sstream>

namespace htn {

namespace {

std::string wp(int i) {
    return "waypoint" + std::to_string(i);
}

/*
  Star of stars: waypoint0 holds the lander and the rover, every 4th
  waypoint is a hub linked to waypoint0 and to the three waypoints after it.
  Rock samples sit one after each hub, soil samples two after.
*/
std::string rover_problem(int n) {
    const int count = 4 * n;
    std::ostringstream out;
    out << "(define (problem rover-" << n << ")\n  (:domain rover)\n  (:objects\n"
        << "    rover1 - rover\n    rover1store - store\n    general - lander\n   ";
    for (int i = 0; i < count; ++i)
        out << " " << wp(i);
    out << " - waypoint)\n  (:init\n"
        << "    (at rover1 waypoint0)\n    (at_lander general waypoint0)\n"
        << "    (available rover1)\n    (channel_free general)\n"
        << "    (store_of rover1store rover1)\n    (empty rover1store)\n"
        << "    (equipped_for_rock_analysis rover1)\n    (equipped_for_soil_analysis rover1)\n";
    auto link = [&](int a, int b) {
        out << "    (can_traverse rover1 " << wp(a) << " " << wp(b) << ")"
            << " (can_traverse rover1 " << wp(b) << " " << wp(a) << ")\n"
            << "    (visible " << wp(a) << " " << wp(b) << ")"
            << " (visible " << wp(b) << " " << wp(a) << ")\n";
    };
    for (int h = 0; h < count; h += 4) {
        if (h > 0)
            link(0, h);
        for (int k = 1; k <= 3; ++k)
            link(h, h + k);
        out << "    (at_rock_sample " << wp(h + 1) << ")\n"
            << "    (at_soil_sample " << wp(h + 2) << ")\n";
    }
    out << "  )\n  (:goal-tasks (";
    int tag = 1;
    for (int h = 0; h < count; h += 4) {
        out << "\n    (tag t" << tag++ << " (get_rock_data " << wp(h + 1) << "))";
        out << "\n    (tag t" << tag++ << " (get_soil_data " << wp(h + 2) << "))";
    }
    out << ")))\n";
    return out.str();
}

/*
  n children at three tables, every third one allergic. Breads, fillings and
  sandwiches number n + 1; the gluten-free items are listed last so the
  other children use the plain ones first.
*/
std::string childsnack_problem(int n) {
    int allergic = 0;
    for (int i = 0; i < n; ++i)
        allergic += i % 3 == 0;
    const int items = n + 1;
    const int plain = n - allergic;
    std::ostringstream out;
    out << "(define (problem childsnack-" << n << ")\n  (:domain childsnack)\n  (:objects\n   ";
    for (int i = 0; i < n; ++i)
        out << " child" << i;
    out << " - child\n   ";
    for (int i = 0; i < items; ++i)
        out << " bread" << i;
    out << " - bread\n   ";
    for (int i = 0; i < items; ++i)
        out << " content" << i;
    out << " - content\n   ";
    for (int i = 0; i < items; ++i)
        out << " sandw" << i;
    out << " - sandwich\n    tray0 tray1 - tray\n    table1 table2 table3 - place)\n  (:init\n";
    for (int i = 0; i < items; ++i) {
        out << "    (at_kitchen_bread bread" << i << ") (at_kitchen_content content" << i
            << ") (notexist sandw" << i << ")\n";
        if (i >= plain)
            out << "    (no_gluten_bread bread" << i << ") (no_gluten_content content" << i
                << ")\n";
    }
    out << "    (at tray0 kitchen) (at tray1 kitchen)\n";
    for (int i = 0; i < n; ++i) {
        out << "    (" << (i % 3 == 0 ? "allergic_gluten" : "not_allergic_gluten") << " child"
            << i << ") (waiting child" << i << " table" << (i % 3 + 1) << ")\n";
    }
    out << "  )\n  (:goal-tasks (";
    for (int i = 0; i < n; ++i)
        out << "\n    (tag t" << i + 1 << " (serve child" << i << "))";
    out << ")))\n";
    return out.str();
}

/*
  1 + n/3 satellites with two instruments each; instrument k supports modes
  k and k+1 (mod 3) and calibrates on direction k. n observations spread
  over n + 2 directions.
*/
std::string satellite_problem(int n) {
    static const char *const modes[] = {"image", "spectrograph", "thermograph"};
    const int sats = 1 + n / 3;
    const int insts = 2 * sats;
    const int dirs = n + 2;
    std::ostringstream out;
    out << "(define (problem satellite-" << n << ")\n  (:domain satellite)\n  (:objects\n   ";
    for (int s = 0; s < sats; ++s)
        out << " sat" << s;
    out << " - satellite\n   ";
    for (int k = 0; k < insts; ++k)
        out << " inst" << k;
    out << " - instrument\n    image spectrograph thermograph - mode\n   ";
    for (int d = 0; d < dirs; ++d)
        out << " dir" << d;
    out << " - direction)\n  (:init\n";
    for (int s = 0; s < sats; ++s)
        out << "    (power_avail sat" << s << ") (pointing sat" << s << " dir" << (s % dirs)
            << ")\n";
    for (int k = 0; k < insts; ++k) {
        out << "    (on_board inst" << k << " sat" << k / 2 << ") (supports inst" << k << " "
            << modes[k % 3] << ") (supports inst" << k << " " << modes[(k + 1) % 3]
            << ") (calibration_target inst" << k << " dir" << (k % dirs) << ")\n";
    }
    out << "  )\n  (:goal-tasks (";
    for (int i = 0; i < n; ++i) {
        out << "\n    (tag t" << i + 1 << " (do_observation dir" << (i * 7 + 1) % dirs << " "
            << modes[i % 3] << "))";
    }
    out << ")))\n";
    return out.str();
}

} // namespace

const std::vector<std::string> &family_names() {
    static const std::vector<std::string> names = {"rover", "childsnack", "satellite"};
    return names;
}

std::string family_domain_path(const std::string &family) {
    for (const auto &name : family_names())
        if (name == family)
            return family + "/domain.pddl";
    throw Error("unknown family '" + family + "'");
}

std::string generate_family_problem(const std::string &family, int size) {
    if (size < 1)
        throw Error("family size must be at least 1");
    if (family == "rover")
        return rover_problem(size);
    if (family == "childsnack")
        return childsnack_problem(size);
    if (family == "satellite")
        return satellite_problem(size);
    throw Error("unknown family '" + family + "'");
}

} // namespace htn
