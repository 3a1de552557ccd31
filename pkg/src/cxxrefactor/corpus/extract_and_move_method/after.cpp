#include <iostream>
#include <string>
class Console {
public:
    int width;
    static void write(std::string text) {
        std::cout << "[log] ";
        std::cout << text << std::endl;
    }
};
class Logger {
public:
    void log(std::string message) {
        Console::write(message);
    }
};
