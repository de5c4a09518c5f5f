var widget = {
  label: "w1",
  render: function () {
    var lines = [1, 2].map((n) => this.label + "#" + n);
    var get = () => this.label;
    return lines.join(",") + "/" + get();
  },
};
out(widget.render());
