class Stats {
public:
    int sumOfSquares(int a, int b) {
        int tmp = a * a;
        tmp = tmp + b * b;
        return tmp;
    }
};
