// Scripted stand-in for an external placeholder detector. Speaks the
// line-delimited JSON protocol on stdin/stdout; the mode argument selects
// the behaviour under test.

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "box";

    std::string line;
    while (std::getline(std::cin, line)) {
        if (mode == "quit-early")
            return 0;

        nlohmann::json request = nlohmann::json::parse(line, nullptr, false);
        const int id = request.is_object() && request.contains("id") ? request["id"].get<int>() : -1;

        if (mode == "garbage") {
            std::cout << "this is not json\n" << std::flush;
            continue;
        }
        if (mode == "sleep")
            std::this_thread::sleep_for(std::chrono::seconds(2));

        nlohmann::json boxes = nlohmann::json::array();
        if (mode == "box" || mode == "sleep")
            boxes.push_back({{"x", 10}, {"y", 10}, {"w", 100}, {"h", 100}, {"conf", 0.9}});
        else if (mode == "lowconf")
            boxes.push_back({{"x", 10}, {"y", 10}, {"w", 100}, {"h", 100}, {"conf", 0.3}});
        else if (mode == "outside")
            boxes.push_back({{"x", -20}, {"y", -20}, {"w", 100}, {"h", 4000}, {"conf", 0.9}});
        else if (mode == "two-boxes") {
            boxes.push_back({{"x", 0}, {"y", 0}, {"w", 50}, {"h", 50}, {"conf", 0.8}});
            boxes.push_back({{"x", 25}, {"y", 25}, {"w", 50}, {"h", 50}, {"conf", 0.7}});
        }

        nlohmann::json response{{"id", mode == "mismatch" ? id + 1 : id}, {"boxes", boxes}};
        std::cout << response.dump() << "\n" << std::flush;
    }
    return 0;
}
