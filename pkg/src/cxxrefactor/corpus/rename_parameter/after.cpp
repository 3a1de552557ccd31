class Greeter {
public:
    int greet(int times) {
        int count = times * 2;
        return count + times;
    }
};
