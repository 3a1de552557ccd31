class Greeter {
public:
    int greet(int n) {
        int count = n * 2;
        return count + n;
    }
};
