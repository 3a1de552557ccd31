namespace geometry {
class Point {
public:
    int x;
    int y;
    int sum() {
        return x + y;
    }
};
}
namespace shapes {
class Square {
public:
    int side;
};
}
