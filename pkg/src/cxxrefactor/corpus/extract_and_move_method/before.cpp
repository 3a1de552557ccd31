#include <iostream>
#include <string>
class Console {
public:
    int width;
};
class Logger {
public:
    void log(std::string message) {
        std::cout << "[log] ";
        std::cout << message << std::endl;
    }
};
