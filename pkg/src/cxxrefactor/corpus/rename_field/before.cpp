class Tally {
public:
    int cnt;
    void increment() {
        cnt = cnt + 1;
    }
    int get() {
        return cnt;
    }
};
