class Averager {
public:
    double average(int a, int b) {
        int total = a + b;
        return total / 2.0;
    }
};
