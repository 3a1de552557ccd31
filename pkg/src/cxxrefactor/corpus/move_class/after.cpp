namespace geometry {
}
namespace shapes {
class Point {
public:
    int x;
    int y;
    int sum() {
        return x + y;
    }
};
class Square {
public:
    int side;
};
}
