class Averager {
public:
    double average(int a, int b) {
        long total = a + b;
        return total / 2.0;
    }
};
